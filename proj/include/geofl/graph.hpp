#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace geofl {

/// Simple undirected graph over dense node ids 0..n-1. No loops, no parallel
/// edges. Edges live both in a hash set (membership and equality tests) and in
/// adjacency lists (what the coloring algorithms iterate). Intended use is
/// build once, then treat as read-only; none of the accessors mutate.
class UndirectedGraph {
public:
    explicit UndirectedGraph(int node_count);

    int node_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }

    /// Adds {a, b}. Repeated insertion is a no-op; a == b or an id outside
    /// 0..n-1 is an error.
    void add_edge(int a, int b);

    bool has_edge(int a, int b) const;
    std::span<const int> neighbors(int v) const;
    int degree(int v) const;

    /// Fraction of the n*(n-1)/2 possible edges present; needs n >= 2.
    double density() const;

    /// Graph on the same nodes whose edges are exactly the missing pairs.
    UndirectedGraph complement() const;

    /// All edges as (a, b) pairs with a < b, sorted.
    std::vector<std::pair<int, int>> edge_list() const;

    /// One "a b" pair per line, a < b, lines sorted as strings.
    std::string edge_list_text() const;

    bool operator==(const UndirectedGraph& other) const {
        return n_ == other.n_ && edges_ == other.edges_;
    }

private:
    std::uint64_t key(int a, int b) const;
    void check_node(int v) const;

    int n_;
    std::vector<std::vector<int>> adj_;
    std::unordered_set<std::uint64_t> edges_;
};

} // namespace geofl
