#include "geofl/graph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace geofl {

UndirectedGraph::UndirectedGraph(int node_count) : n_(node_count) {
    if (node_count < 0) throw std::invalid_argument("UndirectedGraph: negative node count");
    adj_.resize(static_cast<std::size_t>(node_count));
}

std::uint64_t UndirectedGraph::key(int a, int b) const {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

void UndirectedGraph::check_node(int v) const {
    if (v < 0 || v >= n_) throw std::out_of_range("UndirectedGraph: unknown node id");
}

void UndirectedGraph::add_edge(int a, int b) {
    check_node(a);
    check_node(b);
    if (a == b) throw std::invalid_argument("UndirectedGraph: self loop rejected");
    if (!edges_.insert(key(a, b)).second) return;
    adj_[static_cast<std::size_t>(a)].push_back(b);
    adj_[static_cast<std::size_t>(b)].push_back(a);
}

bool UndirectedGraph::has_edge(int a, int b) const {
    check_node(a);
    check_node(b);
    if (a == b) return false;
    return edges_.count(key(a, b)) != 0;
}

std::span<const int> UndirectedGraph::neighbors(int v) const {
    check_node(v);
    return adj_[static_cast<std::size_t>(v)];
}

int UndirectedGraph::degree(int v) const {
    check_node(v);
    return static_cast<int>(adj_[static_cast<std::size_t>(v)].size());
}

double UndirectedGraph::density() const {
    if (n_ < 2) throw std::domain_error("UndirectedGraph: density needs at least two nodes");
    const double possible = 0.5 * static_cast<double>(n_) * static_cast<double>(n_ - 1);
    return static_cast<double>(edges_.size()) / possible;
}

UndirectedGraph UndirectedGraph::complement() const {
    UndirectedGraph c(n_);
    for (int a = 0; a < n_; ++a)
        for (int b = a + 1; b < n_; ++b)
            if (!edges_.count(key(a, b))) c.add_edge(a, b);
    return c;
}

std::vector<std::pair<int, int>> UndirectedGraph::edge_list() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edges_.size());
    for (std::uint64_t k : edges_)
        out.emplace_back(static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffull));
    std::sort(out.begin(), out.end());
    return out;
}

std::string UndirectedGraph::edge_list_text() const {
    std::vector<std::string> lines;
    lines.reserve(edges_.size());
    for (auto [a, b] : edge_list())
        lines.push_back(std::to_string(a) + " " + std::to_string(b));
    std::sort(lines.begin(), lines.end());
    std::ostringstream os;
    for (const auto& l : lines) os << l << '\n';
    return os.str();
}

} // namespace geofl
