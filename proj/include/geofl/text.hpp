#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace geofl {

/// Fixed-decimal formatting; every file format in this project pins floats to
/// a fixed number of decimals so outputs are byte-stable.
inline std::string format_fixed(double v, int decimals = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double(const std::string& s) {
    std::size_t pos = 0;
    const std::string t = trim(s);
    double v;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (pos != t.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

inline long long parse_int(const std::string& s) {
    std::size_t pos = 0;
    const std::string t = trim(s);
    long long v;
    try {
        v = std::stoll(t, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("not an integer: '" + s + "'");
    }
    if (pos != t.size()) throw std::invalid_argument("not an integer: '" + s + "'");
    return v;
}

inline bool is_number(const std::string& s) {
    std::size_t pos = 0;
    const std::string t = trim(s);
    if (t.empty()) return false;
    try {
        (void)std::stod(t, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == t.size();
}

} // namespace geofl
