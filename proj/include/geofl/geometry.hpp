#pragma once

#include <cmath>

namespace geofl {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance_sq(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace geofl
