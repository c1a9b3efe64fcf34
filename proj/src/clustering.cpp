#include "geofl/clustering.hpp"

#include <cmath>
#include <stdexcept>

namespace geofl {

namespace {

/// Neumaier-compensated sum; keeps the unit-sum check meaningful for long
/// weight vectors.
double stable_sum(std::span<const double> v) {
    double s = 0.0, c = 0.0;
    for (double x : v) {
        const double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    return s + c;
}

/// Weighted indicator average with exact endpoints: all-hit gives 1, no-hit
/// gives 0 regardless of rounding in the weight vector.
template <typename Pred>
double weighted_indicator(std::span<const double> w, std::size_t count, Pred hit) {
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t t = 0; t < count; ++t) {
        if (hit(t)) {
            ++hits;
            sum += w[t];
        }
    }
    if (hits == count) return 1.0;
    if (hits == 0) return 0.0;
    return sum;
}

} // namespace

DiscountWeights::DiscountWeights(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw std::invalid_argument("weights: empty");
    for (std::size_t t = 0; t < w_.size(); ++t) {
        if (!(w_[t] >= 0.0)) throw std::invalid_argument("weights: negative entry");
        if (t > 0 && w_[t] < w_[t - 1])
            throw std::invalid_argument("weights: must be non-decreasing");
    }
    if (std::abs(stable_sum(w_) - 1.0) > 1e-12)
        throw std::invalid_argument("weights: must sum to 1");
}

DiscountWeights linear_weights(int history_len) {
    if (history_len < 1) throw std::invalid_argument("linear_weights: history_len must be >= 1");
    const double denom = 0.5 * history_len * (history_len + 1.0);
    std::vector<double> w(static_cast<std::size_t>(history_len));
    for (int t = 1; t <= history_len; ++t)
        w[static_cast<std::size_t>(t - 1)] = static_cast<double>(t) / denom;
    return DiscountWeights(std::move(w));
}

ClusterSpec::ClusterSpec(Point center_, double d_max_, double d_min_, DiscountWeights weights_,
                         double xi_cs_, double xi_ps_)
    : center(center_), d_max(d_max_), d_min(d_min_), weights(std::move(weights_)),
      xi_cs(xi_cs_), xi_ps(xi_ps_) {
    if (!(d_min > 0.0) || !(d_min < d_max))
        throw std::invalid_argument("cluster: need 0 < d_min < d_max");
    if (!(xi_cs >= 0.0) || xi_cs > 1.0 || !(xi_ps >= 0.0) || xi_ps > 1.0)
        throw std::invalid_argument("cluster: thresholds must be in [0, 1]");
}

ClusterSpec ClusterSpec::for_scenario(const Scenario& s, double xi_cs, double xi_ps) {
    s.validate();
    return ClusterSpec(Point{s.side_length / 2.0, s.side_length / 2.0}, s.d_max, s.d_min,
                       linear_weights(s.history_len), xi_cs, xi_ps);
}

double clustering_suitability(const NodeTrace& trace, const ClusterSpec& spec) {
    const auto w = spec.weights.values();
    if (trace.positions.size() != w.size())
        throw std::invalid_argument("clustering_suitability: trace length != weight count");
    const double r = spec.d_max / 2.0;
    const double r2 = r * r;
    return weighted_indicator(w, w.size(), [&](std::size_t t) {
        return distance_sq(trace.positions[t], spec.center) <= r2;
    });
}

double pairing_suitability(const NodeTrace& a, const NodeTrace& b, const ClusterSpec& spec) {
    const auto w = spec.weights.values();
    if (a.positions.size() != w.size() || b.positions.size() != w.size())
        throw std::invalid_argument("pairing_suitability: trace length != weight count");
    const double d2 = spec.d_min * spec.d_min;
    return weighted_indicator(w, w.size(), [&](std::size_t t) {
        return distance_sq(a.positions[t], b.positions[t]) > d2;
    });
}

double SuitabilityResult::ps(int i, int j) const {
    const int m = graph.node_count();
    if (i < 0 || j < 0 || i >= m || j >= m || i == j)
        throw std::out_of_range("SuitabilityResult::ps: bad pair");
    if (i > j) std::swap(i, j);
    const std::size_t idx = static_cast<std::size_t>(i) * m - static_cast<std::size_t>(i) * (i + 1) / 2 +
                            static_cast<std::size_t>(j - i - 1);
    return ps_values[idx];
}

SuitabilityResult dynamic_clustering(const Deployment& d, const ClusterSpec& spec) {
    std::vector<double> cs(d.traces.size(), 0.0);
    std::vector<int> suitable;
    for (std::size_t i = 0; i < d.traces.size(); ++i) {
        cs[i] = clustering_suitability(d.traces[i], spec);
        if (cs[i] >= spec.xi_cs) suitable.push_back(static_cast<int>(i));
    }
    if (suitable.size() < 2)
        throw std::runtime_error("insufficient suitable nodes: need at least two to form a group");

    const int m = static_cast<int>(suitable.size());
    SuitabilityResult out{std::move(suitable), std::move(cs), UndirectedGraph(m), {}};
    out.ps_values.resize(static_cast<std::size_t>(m) * (m - 1) / 2, 0.0);
    std::size_t idx = 0;
    for (int i = 0; i < m; ++i) {
        const auto& ti = d.traces[static_cast<std::size_t>(out.suitable_ids[static_cast<std::size_t>(i)])];
        for (int j = i + 1; j < m; ++j, ++idx) {
            const auto& tj = d.traces[static_cast<std::size_t>(out.suitable_ids[static_cast<std::size_t>(j)])];
            const double v = pairing_suitability(ti, tj, spec);
            out.ps_values[idx] = v;
            if (v >= spec.xi_ps) out.graph.add_edge(i, j);
        }
    }
    return out;
}

} // namespace geofl
