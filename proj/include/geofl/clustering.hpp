#pragma once

#include <span>
#include <vector>

#include "geofl/geometry.hpp"
#include "geofl/graph.hpp"
#include "geofl/mobility.hpp"

namespace geofl {

/// History discount weights: non-negative, non-decreasing (recent samples
/// weigh at least as much as old ones), summing to 1.
class DiscountWeights {
public:
    explicit DiscountWeights(std::vector<double> w);

    std::span<const double> values() const { return w_; }
    std::size_t size() const { return w_.size(); }

private:
    std::vector<double> w_;
};

/// w_t proportional to t for t = 1..history_len, normalized by the triangular
/// sum history_len * (history_len + 1) / 2.
DiscountWeights linear_weights(int history_len);

/// Cluster geometry and membership thresholds. The cluster is the disk of
/// diameter d_max centered on `center`; suitability scores are discounted
/// averages of per-sample indicators over a node's position history.
struct ClusterSpec {
    ClusterSpec(Point center, double d_max, double d_min, DiscountWeights weights,
                double xi_cs = 0.7, double xi_ps = 0.7);

    /// Disk of diameter scenario.d_max inscribed at the area center, linear
    /// weights over scenario.history_len.
    static ClusterSpec for_scenario(const Scenario& s, double xi_cs = 0.7, double xi_ps = 0.7);

    Point center;
    double d_max;
    double d_min;
    DiscountWeights weights;
    double xi_cs;
    double xi_ps;
};

/// Weighted fraction of history samples the node spent inside the cluster
/// disk (distance to center <= d_max / 2, boundary inclusive). In [0, 1];
/// exactly 0 or 1 when no sample, or every sample, is inside.
double clustering_suitability(const NodeTrace& trace, const ClusterSpec& spec);

/// Weighted fraction of history samples during which the two nodes were
/// strictly farther apart than d_min. In [0, 1] with the same exactness at the
/// extremes.
double pairing_suitability(const NodeTrace& a, const NodeTrace& b, const ClusterSpec& spec);

/// Output of the clustering pass: which nodes are suitable, their pairwise
/// suitability graph, and the raw scores for diagnostics.
struct SuitabilityResult {
    std::vector<int> suitable_ids;  // original node ids, ascending
    std::vector<double> cs_values;  // per original node id, all nodes
    UndirectedGraph graph;          // over suitable nodes, reindexed 0..|suitable|-1

    /// Pairing suitability for suitable-node indexes i != j.
    double ps(int i, int j) const;

    std::vector<double> ps_values;  // upper-triangular, row-major
};

/// Scores every node, keeps those with clustering suitability >= xi_cs, and
/// connects suitable pairs whose pairing suitability >= xi_ps. Grouping
/// operates on the complement of the returned graph. Errors when fewer than
/// two nodes qualify.
SuitabilityResult dynamic_clustering(const Deployment& d, const ClusterSpec& spec);

} // namespace geofl
