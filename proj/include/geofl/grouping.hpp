#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geofl/graph.hpp"
#include "geofl/rng.hpp"

namespace geofl {

enum class VarianceMode { population, sample };

/// A (partial) grouping: k disjoint groups plus the ungrouped pool. Groups may
/// be empty; a node appears in exactly one place.
struct GroupingSolution {
    std::vector<std::vector<int>> groups;
    std::vector<int> ungrouped;

    int k() const { return static_cast<int>(groups.size()); }
    int total_nodes() const;
    std::vector<int> group_sizes() const;

    /// node -> group index, -1 for ungrouped. Errors if ids are not a
    /// permutation-free subset of 0..n-1 or appear twice.
    std::vector<int> to_assignment(int n) const;
    static GroupingSolution from_assignment(int k, std::span<const int> assignment);

    /// No two nodes in the same group are adjacent.
    bool is_proper(const UndirectedGraph& g) const;

    /// Sorts group members and the ungrouped pool ascending.
    void normalize();
};

/// Variance of the group sizes (the ungrouped pool is not a group).
double size_variance(const GroupingSolution& s, VarianceMode mode = VarianceMode::population);

/// alpha * |ungrouped| + (1 - alpha) * size variance. Errors when the solution
/// has no groups or alpha is outside (0, 1).
double joint_cost(const GroupingSolution& s, double alpha,
                  VarianceMode mode = VarianceMode::population);

/// Knobs shared by the tabu search and the grouping procedures around it.
struct CostParams {
    double alpha = 0.5;             // ungrouped-vs-evenness tradeoff
    double tr = 0.7;                // group-count descent acceptance ratio
    long long max_ts_iterations = 2000;
    int tabu_tenure_base = 10;      // tenure = base + uniform{0..9}
    bool reves_enabled = false;     // early stopping of the tabu search
    int reves_ws = 150;             // early-stopping window size
    int reves_p = 70;               // stable iterations required to stop
    bool reves_on_raw_cost = false; // monitor per-iteration cost, not best-so-far
    VarianceMode variance_mode = VarianceMode::population;
    bool random_placement = false;  // reinsertion picks a uniform group, not the best one
    bool validate_moves = false;    // recheck state and cost after every move (slow)

    void validate() const;
};

/// First-fit proper coloring in the given node order; nodes that fit no group
/// go to the ungrouped pool.
GroupingSolution greedy_color(const UndirectedGraph& g, int k, std::span<const int> order);

struct DsaturResult {
    int k = 0;
    GroupingSolution solution; // complete proper coloring, nothing ungrouped
};

/// Saturation-degree coloring: repeatedly colors the node with the most
/// distinctly-colored neighbors (ties: higher degree, then lower id) with the
/// lowest feasible color.
DsaturResult dsatur(const UndirectedGraph& g);

struct ElfResult {
    GroupingSolution solution;
    double cost = 0.0;
};

/// Equitable largest-first greedy: nodes in descending degree order (ties:
/// lower id) go to the smallest proper group (ties: lowest index), otherwise
/// to the ungrouped pool.
ElfResult elf_greedy(const UndirectedGraph& g, int k, double alpha,
                     VarianceMode mode = VarianceMode::population);

/// Sliding-window early stopping for the tabu search: stop once both the
/// windowed minimum and maximum of the monitored cost stream have stayed
/// unchanged for p consecutive iterations. With a constant stream the stop
/// lands exactly at iteration ws + p.
class RevesMonitor {
public:
    RevesMonitor(int window_size, int patience);

    /// Feeds the next cost; true means stop now.
    bool push(double cost);

private:
    int ws_;
    int patience_;
    long long t_ = 0;
    int stable_ = 0;
    bool have_prev_ = false;
    double prev_min_ = 0.0, prev_max_ = 0.0;
    std::deque<std::pair<long long, double>> window_min_, window_max_;
};

struct TsResult {
    GroupingSolution solution; // best solution seen
    double cost = 0.0;         // its joint cost
    long long iterations = 0;  // moves actually applied
};

/// Tabu search over partial proper colorings with a fixed group count,
/// minimizing the joint cost. Two move kinds:
///   - ungrouped pool non-empty: reinsert a random ungrouped node into the
///     group giving the lowest cost, evicting its neighbors there (evictees
///     become tabu for that group);
///   - pool empty: shift max(|largest| - |smallest|, 1) random nodes from the
///     largest group to the pool (tabu against returning there).
/// Tabu placements are still taken when they beat the best cost seen. The
/// start solution must be proper; the best solution ever seen is returned.
TsResult modified_tabu_search(const GroupingSolution& start, const UndirectedGraph& g,
                              const CostParams& params, Rng& rng);

enum class InitMethod { elf, random_greedy };

struct GroupingOutcome {
    GroupingSolution solution;
    double cost = 0.0;
    long long ts_iterations = 0;                  // summed over all searches
    std::vector<std::pair<int, double>> k_history; // (k, cost) per descent step
};

/// Partial-steady grouping: start from the saturation-degree group count, then
/// repeatedly drop k by one (init per InitMethod, then tabu search) while each
/// new cost stays within `tr` times the previous one; on the first failure the
/// previous solution is returned. Hard floor at k = 1. Each descent step runs
/// on an independent stream derived from (rng seed, step index).
GroupingOutcome psg(const UndirectedGraph& g, const CostParams& params, const Rng& rng,
                    InitMethod init = InitMethod::elf);

struct BaselineResult {
    int k = 0;
    GroupingSolution solution; // complete proper coloring
    long long ts_iterations = 0;
};

/// Complete-coloring baseline: descend k from the saturation-degree count; at
/// each k, greedy init then tabu search minimizing the ungrouped count only
/// (reinsertion moves). Stops at the first k whose pool cannot be emptied
/// within the iteration budget and returns the last complete coloring.
BaselineResult partialcol_baseline(const UndirectedGraph& g, const CostParams& params,
                                   const Rng& rng, InitMethod init = InitMethod::random_greedy);

/// Complete-coloring baseline over clashing assignments: descend k as above;
/// at each k, greedy assignment in random node order (a node with no proper
/// set left takes a random one) then tabu search that recolors clashing nodes
/// to minimize the clash count; success is zero clashes.
BaselineResult tabucol_baseline(const UndirectedGraph& g, const CostParams& params,
                                const Rng& rng);

/// Text form: one "S<j>: id,id,..." line per group (1-based, ids ascending),
/// then "U: ..." and a "k=<k> cost=<cost> alpha=<alpha>" trailer.
std::string solution_to_text(const GroupingSolution& s, double alpha, double cost);
GroupingSolution solution_from_text(std::istream& is, double* alpha_out = nullptr,
                                    double* cost_out = nullptr);

} // namespace geofl
