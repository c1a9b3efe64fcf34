#include "geofl/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "geofl/text.hpp"

namespace geofl {

namespace {

double variance_from(long long sum, long long sumsq, int k, VarianceMode mode) {
    const double s = static_cast<double>(sum);
    const double ss = static_cast<double>(sumsq);
    const double kk = static_cast<double>(k);
    double v;
    if (mode == VarianceMode::population) {
        v = ss / kk - (s / kk) * (s / kk);
    } else {
        if (k < 2) return 0.0;
        v = (ss - s * s / kk) / (kk - 1.0);
    }
    return v < 0.0 ? 0.0 : v;
}

/// Unordered membership lists with O(1) removal via a node -> slot index.
void list_add(std::vector<int>& list, std::vector<int>& slot, int node) {
    slot[static_cast<std::size_t>(node)] = static_cast<int>(list.size());
    list.push_back(node);
}

void list_remove(std::vector<int>& list, std::vector<int>& slot, int node) {
    const int idx = slot[static_cast<std::size_t>(node)];
    const int last = list.back();
    list[static_cast<std::size_t>(idx)] = last;
    slot[static_cast<std::size_t>(last)] = idx;
    list.pop_back();
}

/// Uniform choice among equal-valued candidates without materializing them:
/// standard reservoir step, one draw per tie encountered.
struct Reservoir {
    int count = 0;
    bool offer(Rng& rng) { return rng.below(static_cast<std::uint64_t>(++count)) == 0; }
    void reset() { count = 0; }
};

std::vector<int> descending_degree_order(const UndirectedGraph& g) {
    std::vector<int> order(static_cast<std::size_t>(g.node_count()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
        return a < b;
    });
    return order;
}

} // namespace

int GroupingSolution::total_nodes() const {
    std::size_t n = ungrouped.size();
    for (const auto& s : groups) n += s.size();
    return static_cast<int>(n);
}

std::vector<int> GroupingSolution::group_sizes() const {
    std::vector<int> out;
    out.reserve(groups.size());
    for (const auto& s : groups) out.push_back(static_cast<int>(s.size()));
    return out;
}

std::vector<int> GroupingSolution::to_assignment(int n) const {
    std::vector<int> color(static_cast<std::size_t>(n), -2);
    auto place = [&](int id, int c) {
        if (id < 0 || id >= n) throw std::invalid_argument("solution: node id out of range");
        if (color[static_cast<std::size_t>(id)] != -2)
            throw std::invalid_argument("solution: node appears twice");
        color[static_cast<std::size_t>(id)] = c;
    };
    for (std::size_t j = 0; j < groups.size(); ++j)
        for (int id : groups[j]) place(id, static_cast<int>(j));
    for (int id : ungrouped) place(id, -1);
    for (int c : color)
        if (c == -2) throw std::invalid_argument("solution: node missing from the partition");
    return color;
}

GroupingSolution GroupingSolution::from_assignment(int k, std::span<const int> assignment) {
    if (k < 0) throw std::invalid_argument("solution: negative group count");
    GroupingSolution s;
    s.groups.resize(static_cast<std::size_t>(k));
    for (std::size_t id = 0; id < assignment.size(); ++id) {
        const int c = assignment[id];
        if (c < -1 || c >= k) throw std::invalid_argument("solution: assignment out of range");
        if (c < 0)
            s.ungrouped.push_back(static_cast<int>(id));
        else
            s.groups[static_cast<std::size_t>(c)].push_back(static_cast<int>(id));
    }
    return s;
}

bool GroupingSolution::is_proper(const UndirectedGraph& g) const {
    for (const auto& set : groups)
        for (std::size_t a = 0; a < set.size(); ++a)
            for (std::size_t b = a + 1; b < set.size(); ++b)
                if (g.has_edge(set[a], set[b])) return false;
    return true;
}

void GroupingSolution::normalize() {
    for (auto& s : groups) std::sort(s.begin(), s.end());
    std::sort(ungrouped.begin(), ungrouped.end());
}

double size_variance(const GroupingSolution& s, VarianceMode mode) {
    if (s.groups.empty()) throw std::domain_error("size variance undefined without groups");
    long long sum = 0, sumsq = 0;
    for (const auto& set : s.groups) {
        const long long sz = static_cast<long long>(set.size());
        sum += sz;
        sumsq += sz * sz;
    }
    return variance_from(sum, sumsq, s.k(), mode);
}

double joint_cost(const GroupingSolution& s, double alpha, VarianceMode mode) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("joint cost: alpha must be in (0, 1)");
    return alpha * static_cast<double>(s.ungrouped.size()) + (1.0 - alpha) * size_variance(s, mode);
}

void CostParams::validate() const {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("params: alpha must be in (0, 1)");
    if (!(tr > 0.0) || tr > 1.0) throw std::invalid_argument("params: tr must be in (0, 1]");
    if (max_ts_iterations < 0) throw std::invalid_argument("params: negative iteration budget");
    if (tabu_tenure_base < 0) throw std::invalid_argument("params: negative tabu tenure");
    if (reves_ws < 1 || reves_p < 1)
        throw std::invalid_argument("params: early-stopping window and patience must be >= 1");
}

GroupingSolution greedy_color(const UndirectedGraph& g, int k, std::span<const int> order) {
    if (k < 1) throw std::invalid_argument("greedy_color: need at least one group");
    const int n = g.node_count();
    if (static_cast<int>(order.size()) != n)
        throw std::invalid_argument("greedy_color: order must list every node once");
    std::vector<int> color(static_cast<std::size_t>(n), -1);
    std::vector<int> mark(static_cast<std::size_t>(k), -1);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    int stamp = 0;
    for (int u : order) {
        if (u < 0 || u >= n) throw std::invalid_argument("greedy_color: bad node id in order");
        if (seen[static_cast<std::size_t>(u)])
            throw std::invalid_argument("greedy_color: order repeats a node");
        seen[static_cast<std::size_t>(u)] = 1;
        for (int w : g.neighbors(u))
            if (color[static_cast<std::size_t>(w)] >= 0)
                mark[static_cast<std::size_t>(color[static_cast<std::size_t>(w)])] = stamp;
        int chosen = -1;
        for (int j = 0; j < k; ++j)
            if (mark[static_cast<std::size_t>(j)] != stamp) {
                chosen = j;
                break;
            }
        color[static_cast<std::size_t>(u)] = chosen;
        ++stamp;
    }
    auto s = GroupingSolution::from_assignment(k, color);
    s.normalize();
    return s;
}

DsaturResult dsatur(const UndirectedGraph& g) {
    const int n = g.node_count();
    if (n == 0) throw std::invalid_argument("dsatur: empty graph");
    int maxdeg = 0;
    for (int v = 0; v < n; ++v) maxdeg = std::max(maxdeg, g.degree(v));
    const int cap = maxdeg + 2; // greedy never needs more than maxdeg + 1 colors

    std::vector<int> color(static_cast<std::size_t>(n), -1);
    std::vector<int> sat(static_cast<std::size_t>(n), 0);
    std::vector<char> adjacent_color(static_cast<std::size_t>(n) * cap, 0);
    int k = 0;
    for (int step = 0; step < n; ++step) {
        int v = -1;
        for (int u = 0; u < n; ++u) {
            if (color[static_cast<std::size_t>(u)] >= 0) continue;
            if (v < 0 || sat[static_cast<std::size_t>(u)] > sat[static_cast<std::size_t>(v)] ||
                (sat[static_cast<std::size_t>(u)] == sat[static_cast<std::size_t>(v)] &&
                 g.degree(u) > g.degree(v)))
                v = u;
        }
        int c = 0;
        while (adjacent_color[static_cast<std::size_t>(v) * cap + c]) ++c;
        color[static_cast<std::size_t>(v)] = c;
        k = std::max(k, c + 1);
        for (int w : g.neighbors(v)) {
            char& flag = adjacent_color[static_cast<std::size_t>(w) * cap + c];
            if (!flag) {
                flag = 1;
                if (color[static_cast<std::size_t>(w)] < 0) ++sat[static_cast<std::size_t>(w)];
            }
        }
    }
    DsaturResult out;
    out.k = k;
    out.solution = GroupingSolution::from_assignment(k, color);
    out.solution.normalize();
    return out;
}

ElfResult elf_greedy(const UndirectedGraph& g, int k, double alpha, VarianceMode mode) {
    if (k < 1) throw std::invalid_argument("elf_greedy: need at least one group");
    const int n = g.node_count();
    std::vector<int> color(static_cast<std::size_t>(n), -1);
    std::vector<int> mark(static_cast<std::size_t>(k), -1);
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    int stamp = 0;
    for (int u : descending_degree_order(g)) {
        for (int w : g.neighbors(u))
            if (color[static_cast<std::size_t>(w)] >= 0)
                mark[static_cast<std::size_t>(color[static_cast<std::size_t>(w)])] = stamp;
        int chosen = -1;
        for (int j = 0; j < k; ++j) {
            if (mark[static_cast<std::size_t>(j)] == stamp) continue;
            if (chosen < 0 || sizes[static_cast<std::size_t>(j)] < sizes[static_cast<std::size_t>(chosen)])
                chosen = j;
        }
        if (chosen >= 0) ++sizes[static_cast<std::size_t>(chosen)];
        color[static_cast<std::size_t>(u)] = chosen;
        ++stamp;
    }
    ElfResult out;
    out.solution = GroupingSolution::from_assignment(k, color);
    out.solution.normalize();
    out.cost = joint_cost(out.solution, alpha, mode);
    return out;
}

RevesMonitor::RevesMonitor(int window_size, int patience) : ws_(window_size), patience_(patience) {
    if (window_size < 1 || patience < 1)
        throw std::invalid_argument("early stopping: window and patience must be >= 1");
}

bool RevesMonitor::push(double cost) {
    ++t_;
    const long long cutoff = t_ - ws_;
    while (!window_min_.empty() && window_min_.front().first <= cutoff) window_min_.pop_front();
    while (!window_max_.empty() && window_max_.front().first <= cutoff) window_max_.pop_front();
    while (!window_min_.empty() && window_min_.back().second >= cost) window_min_.pop_back();
    window_min_.emplace_back(t_, cost);
    while (!window_max_.empty() && window_max_.back().second <= cost) window_max_.pop_back();
    window_max_.emplace_back(t_, cost);

    if (t_ < ws_) return false; // window not yet full
    const double mn = window_min_.front().second;
    const double mx = window_max_.front().second;
    if (have_prev_ && mn == prev_min_ && mx == prev_max_)
        ++stable_;
    else
        stable_ = 0;
    prev_min_ = mn;
    prev_max_ = mx;
    have_prev_ = true;
    return stable_ >= patience_;
}

namespace {

/// Shared mutable state of the joint-cost tabu search.
struct SearchState {
    const UndirectedGraph& g;
    int k;
    std::vector<int> color;                // -1 = ungrouped pool
    std::vector<std::vector<int>> members; // unordered group membership
    std::vector<int> pool;                 // unordered ungrouped membership
    std::vector<int> slot;                 // node -> index in its list
    long long sum = 0, sumsq = 0;          // over group sizes

    SearchState(const UndirectedGraph& graph, int groups, std::vector<int> assignment)
        : g(graph), k(groups), color(std::move(assignment)) {
        const int n = g.node_count();
        members.resize(static_cast<std::size_t>(k));
        slot.assign(static_cast<std::size_t>(n), -1);
        for (int v = 0; v < n; ++v) {
            const int c = color[static_cast<std::size_t>(v)];
            if (c < 0)
                list_add(pool, slot, v);
            else
                list_add(members[static_cast<std::size_t>(c)], slot, v);
        }
        for (const auto& m : members) {
            const long long sz = static_cast<long long>(m.size());
            sum += sz;
            sumsq += sz * sz;
        }
    }

    long long group_size(int j) const { return static_cast<long long>(members[static_cast<std::size_t>(j)].size()); }

    void move_to_pool(int v) {
        const int j = color[static_cast<std::size_t>(v)];
        const long long sz = group_size(j);
        list_remove(members[static_cast<std::size_t>(j)], slot, v);
        sum -= 1;
        sumsq += (sz - 1) * (sz - 1) - sz * sz;
        color[static_cast<std::size_t>(v)] = -1;
        list_add(pool, slot, v);
    }

    void move_to_group(int v, int j) {
        const long long sz = group_size(j);
        list_remove(pool, slot, v);
        color[static_cast<std::size_t>(v)] = j;
        list_add(members[static_cast<std::size_t>(j)], slot, v);
        sum += 1;
        sumsq += (sz + 1) * (sz + 1) - sz * sz;
    }

    double cost(double alpha, VarianceMode mode) const {
        return alpha * static_cast<double>(pool.size()) +
               (1.0 - alpha) * variance_from(sum, sumsq, k, mode);
    }

    GroupingSolution snapshot() const {
        auto s = GroupingSolution::from_assignment(k, color);
        s.normalize();
        return s;
    }

    void check(double reported_cost, double alpha, VarianceMode mode) const {
        const int n = g.node_count();
        long long s2 = 0, ss2 = 0;
        std::size_t placed = pool.size();
        for (int j = 0; j < k; ++j) {
            const long long sz = group_size(j);
            s2 += sz;
            ss2 += sz * sz;
            placed += static_cast<std::size_t>(sz);
            for (int v : members[static_cast<std::size_t>(j)])
                if (color[static_cast<std::size_t>(v)] != j)
                    throw std::logic_error("tabu state: membership and assignment disagree");
        }
        for (int v : pool)
            if (color[static_cast<std::size_t>(v)] != -1)
                throw std::logic_error("tabu state: pool node still assigned");
        if (placed != static_cast<std::size_t>(n))
            throw std::logic_error("tabu state: partition lost a node");
        if (s2 != sum || ss2 != sumsq) throw std::logic_error("tabu state: size sums drifted");
        if (std::abs(cost(alpha, mode) - reported_cost) > 1e-9)
            throw std::logic_error("tabu state: incremental cost drifted");
    }
};

} // namespace

TsResult modified_tabu_search(const GroupingSolution& start, const UndirectedGraph& g,
                              const CostParams& params, Rng& rng) {
    params.validate();
    const int n = g.node_count();
    const int k = start.k();
    if (k < 1) throw std::invalid_argument("tabu search: start solution has no groups");
    if (!start.is_proper(g))
        throw std::invalid_argument("tabu search: start solution is not proper");

    TsResult out;
    out.solution = start;
    out.solution.normalize();
    out.cost = joint_cost(start, params.alpha, params.variance_mode);
    if (n == 0) return out;

    SearchState st(g, k, start.to_assignment(n));
    std::vector<long long> tabu_until(static_cast<std::size_t>(n) * k, 0);
    std::vector<int> evict(static_cast<std::size_t>(k), 0);
    std::vector<int> best_color = st.color;
    double best_cost = out.cost;

    RevesMonitor monitor(params.reves_ws, params.reves_p);
    auto tenure = [&]() { return params.tabu_tenure_base + static_cast<long long>(rng.below(10)); };

    long long it = 0;
    while (it < params.max_ts_iterations) {
        ++it;
        if (!st.pool.empty()) {
            // Reinsertion: random pooled node into the cheapest group, its
            // neighbors there spill back to the pool.
            const int u = st.pool[static_cast<std::size_t>(rng.below(st.pool.size()))];
            std::fill(evict.begin(), evict.end(), 0);
            for (int w : g.neighbors(u)) {
                const int c = st.color[static_cast<std::size_t>(w)];
                if (c >= 0) ++evict[static_cast<std::size_t>(c)];
            }
            int chosen = -1;
            if (params.random_placement) {
                chosen = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
            } else {
                double chosen_cost = 0.0;
                int fallback = -1;
                double fallback_cost = 0.0;
                Reservoir res, res_fb;
                for (int j = 0; j < k; ++j) {
                    const long long e = evict[static_cast<std::size_t>(j)];
                    const long long sz = st.group_size(j);
                    const long long sz2 = sz + 1 - e;
                    const double c =
                        params.alpha * static_cast<double>(static_cast<long long>(st.pool.size()) - 1 + e) +
                        (1.0 - params.alpha) *
                            variance_from(st.sum + 1 - e, st.sumsq + sz2 * sz2 - sz * sz, k,
                                          params.variance_mode);
                    const bool admissible =
                        tabu_until[static_cast<std::size_t>(u) * k + j] < it || c < best_cost;
                    if (admissible) {
                        if (chosen < 0 || c < chosen_cost) {
                            chosen = j;
                            chosen_cost = c;
                            res.reset();
                            res.offer(rng);
                        } else if (c == chosen_cost && res.offer(rng)) {
                            chosen = j;
                        }
                    }
                    if (fallback < 0 || c < fallback_cost) {
                        fallback = j;
                        fallback_cost = c;
                        res_fb.reset();
                        res_fb.offer(rng);
                    } else if (c == fallback_cost && res_fb.offer(rng)) {
                        fallback = j;
                    }
                }
                if (chosen < 0) chosen = fallback; // everything tabu: take the cheapest anyway
            }
            for (int w : g.neighbors(u)) {
                if (st.color[static_cast<std::size_t>(w)] != chosen) continue;
                st.move_to_pool(w);
                tabu_until[static_cast<std::size_t>(w) * k + chosen] = it + tenure();
            }
            st.move_to_group(u, chosen);
        } else {
            // Rebalance: spill random nodes from the largest group.
            int big = 0, small = 0;
            for (int j = 1; j < k; ++j) {
                if (st.group_size(j) > st.group_size(big)) big = j;
                if (st.group_size(j) < st.group_size(small)) small = j;
            }
            long long r = st.group_size(big) - st.group_size(small);
            if (r == 0) r = 1;
            for (long long i = 0; i < r; ++i) {
                auto& m = st.members[static_cast<std::size_t>(big)];
                const int w = m[static_cast<std::size_t>(rng.below(m.size()))];
                st.move_to_pool(w);
                tabu_until[static_cast<std::size_t>(w) * k + big] = it + tenure();
            }
        }

        const double c = st.cost(params.alpha, params.variance_mode);
        if (params.validate_moves) st.check(c, params.alpha, params.variance_mode);
        if (c < best_cost) {
            best_cost = c;
            best_color = st.color;
        }
        if (params.reves_enabled && monitor.push(params.reves_on_raw_cost ? c : best_cost)) break;
    }

    out.iterations = it;
    out.cost = best_cost;
    out.solution = GroupingSolution::from_assignment(k, best_color);
    out.solution.normalize();
    return out;
}

namespace {

GroupingSolution initial_solution(const UndirectedGraph& g, int k, const CostParams& params,
                                  InitMethod init, Rng& rng) {
    if (init == InitMethod::elf) return elf_greedy(g, k, params.alpha, params.variance_mode).solution;
    std::vector<int> order(static_cast<std::size_t>(g.node_count()));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    return greedy_color(g, k, order);
}

} // namespace

GroupingOutcome psg(const UndirectedGraph& g, const CostParams& params, const Rng& rng,
                    InitMethod init) {
    params.validate();
    if (g.node_count() == 0) throw std::invalid_argument("psg: empty graph");

    auto run_at = [&](int k, int step) {
        Rng stream = rng.derive(static_cast<std::uint64_t>(step));
        const auto s0 = initial_solution(g, k, params, init, stream);
        return modified_tabu_search(s0, g, params, stream);
    };

    GroupingOutcome out;
    int step = 0;
    int k = dsatur(g).k;
    TsResult current = run_at(k, step++);
    out.ts_iterations += current.iterations;
    out.k_history.emplace_back(k, current.cost);

    while (k > 1) {
        TsResult trial = run_at(k - 1, step++);
        out.ts_iterations += trial.iterations;
        out.k_history.emplace_back(k - 1, trial.cost);
        if (trial.cost <= current.cost * params.tr) {
            --k;
            current = std::move(trial);
            continue;
        }
        break; // keep the previous k
    }
    out.solution = std::move(current.solution);
    out.cost = current.cost;
    return out;
}

namespace {

struct CompleteSearch {
    bool success = false;
    std::vector<int> color;
    long long iterations = 0;
};

/// Reinsertion-only tabu search minimizing the pool size; succeeds the moment
/// the pool is empty.
CompleteSearch pool_emptying_search(std::vector<int> color, const UndirectedGraph& g, int k,
                                    const CostParams& params, Rng& rng) {
    const int n = g.node_count();
    CompleteSearch out;
    std::vector<int> pool, slot(static_cast<std::size_t>(n), -1);
    for (int v = 0; v < n; ++v)
        if (color[static_cast<std::size_t>(v)] < 0) list_add(pool, slot, v);
    if (pool.empty()) {
        out.success = true;
        out.color = std::move(color);
        return out;
    }

    std::vector<long long> tabu_until(static_cast<std::size_t>(n) * k, 0);
    std::vector<int> evict(static_cast<std::size_t>(k), 0);
    auto tenure = [&]() { return params.tabu_tenure_base + static_cast<long long>(rng.below(10)); };
    std::size_t best_pool = pool.size();

    long long it = 0;
    while (it < params.max_ts_iterations) {
        ++it;
        const int u = pool[static_cast<std::size_t>(rng.below(pool.size()))];
        std::fill(evict.begin(), evict.end(), 0);
        for (int w : g.neighbors(u)) {
            const int c = color[static_cast<std::size_t>(w)];
            if (c >= 0) ++evict[static_cast<std::size_t>(c)];
        }
        int chosen = -1, fallback = -1;
        long long chosen_cost = 0, fallback_cost = 0;
        Reservoir res, res_fb;
        for (int j = 0; j < k; ++j) {
            const long long c = static_cast<long long>(pool.size()) - 1 + evict[static_cast<std::size_t>(j)];
            const bool admissible = tabu_until[static_cast<std::size_t>(u) * k + j] < it ||
                                    c < static_cast<long long>(best_pool);
            if (admissible) {
                if (chosen < 0 || c < chosen_cost) {
                    chosen = j;
                    chosen_cost = c;
                    res.reset();
                    res.offer(rng);
                } else if (c == chosen_cost && res.offer(rng)) {
                    chosen = j;
                }
            }
            if (fallback < 0 || c < fallback_cost) {
                fallback = j;
                fallback_cost = c;
                res_fb.reset();
                res_fb.offer(rng);
            } else if (c == fallback_cost && res_fb.offer(rng)) {
                fallback = j;
            }
        }
        if (chosen < 0) chosen = fallback;

        for (int w : g.neighbors(u)) {
            if (color[static_cast<std::size_t>(w)] != chosen) continue;
            color[static_cast<std::size_t>(w)] = -1;
            list_add(pool, slot, w);
            tabu_until[static_cast<std::size_t>(w) * k + chosen] = it + tenure();
        }
        list_remove(pool, slot, u);
        color[static_cast<std::size_t>(u)] = chosen;
        best_pool = std::min(best_pool, pool.size());
        if (pool.empty()) {
            out.success = true;
            break;
        }
    }
    out.color = std::move(color);
    out.iterations = it;
    return out;
}

/// Clash-count tabu search over complete assignments; succeeds at zero
/// clashing edges.
CompleteSearch clash_search(std::vector<int> color, const UndirectedGraph& g, int k,
                            const CostParams& params, Rng& rng) {
    const int n = g.node_count();
    CompleteSearch out;
    std::vector<int> conflicts(static_cast<std::size_t>(n) * k, 0); // neighbors per color
    long long clash = 0;
    for (int v = 0; v < n; ++v)
        for (int w : g.neighbors(v)) {
            ++conflicts[static_cast<std::size_t>(v) * k + color[static_cast<std::size_t>(w)]];
            if (w > v && color[static_cast<std::size_t>(v)] == color[static_cast<std::size_t>(w)]) ++clash;
        }
    if (clash == 0) {
        out.success = true;
        out.color = std::move(color);
        return out;
    }

    std::vector<long long> tabu_until(static_cast<std::size_t>(n) * k, 0);
    auto tenure = [&]() { return params.tabu_tenure_base + static_cast<long long>(rng.below(10)); };
    long long best_clash = clash;

    long long it = 0;
    while (it < params.max_ts_iterations) {
        ++it;
        int pick_v = -1, pick_c = -1;
        long long pick_cost = 0;
        int fb_v = -1, fb_c = -1;
        long long fb_cost = 0;
        Reservoir res, res_fb;
        for (int v = 0; v < n; ++v) {
            const int cv = color[static_cast<std::size_t>(v)];
            if (conflicts[static_cast<std::size_t>(v) * k + cv] == 0) continue; // not clashing
            for (int c = 0; c < k; ++c) {
                if (c == cv) continue;
                const long long after = clash + conflicts[static_cast<std::size_t>(v) * k + c] -
                                        conflicts[static_cast<std::size_t>(v) * k + cv];
                const bool admissible =
                    tabu_until[static_cast<std::size_t>(v) * k + c] < it || after < best_clash;
                if (admissible) {
                    if (pick_v < 0 || after < pick_cost) {
                        pick_v = v;
                        pick_c = c;
                        pick_cost = after;
                        res.reset();
                        res.offer(rng);
                    } else if (after == pick_cost && res.offer(rng)) {
                        pick_v = v;
                        pick_c = c;
                    }
                }
                if (fb_v < 0 || after < fb_cost) {
                    fb_v = v;
                    fb_c = c;
                    fb_cost = after;
                    res_fb.reset();
                    res_fb.offer(rng);
                } else if (after == fb_cost && res_fb.offer(rng)) {
                    fb_v = v;
                    fb_c = c;
                }
            }
        }
        if (pick_v < 0) {
            pick_v = fb_v;
            pick_c = fb_c;
            pick_cost = fb_cost;
        }
        if (pick_v < 0) break; // no clashing node left to move (cannot happen with clash > 0)

        const int old = color[static_cast<std::size_t>(pick_v)];
        for (int w : g.neighbors(pick_v)) {
            --conflicts[static_cast<std::size_t>(w) * k + old];
            ++conflicts[static_cast<std::size_t>(w) * k + pick_c];
        }
        color[static_cast<std::size_t>(pick_v)] = pick_c;
        clash = pick_cost;
        tabu_until[static_cast<std::size_t>(pick_v) * k + old] = it + tenure();
        best_clash = std::min(best_clash, clash);
        if (clash == 0) {
            out.success = true;
            break;
        }
    }
    out.color = std::move(color);
    out.iterations = it;
    return out;
}

} // namespace

BaselineResult partialcol_baseline(const UndirectedGraph& g, const CostParams& params,
                                   const Rng& rng, InitMethod init) {
    params.validate();
    if (g.node_count() == 0) throw std::invalid_argument("partialcol: empty graph");
    const int n = g.node_count();
    const auto ds = dsatur(g);

    // The first attempt runs at DSatur's k so the returned coloring reflects
    // this variant's own init; DSatur's coloring only survives if even that
    // attempt fails to empty the pool.
    BaselineResult out{ds.k, ds.solution, 0};
    for (int attempt = 0, k = ds.k; k >= 1; ++attempt, --k) {
        Rng stream = rng.derive(static_cast<std::uint64_t>(attempt));
        const auto s0 = initial_solution(g, k, params, init, stream);
        auto res = pool_emptying_search(s0.to_assignment(n), g, k, params, stream);
        out.ts_iterations += res.iterations;
        if (!res.success) break;
        out.k = k;
        out.solution = GroupingSolution::from_assignment(k, res.color);
        out.solution.normalize();
    }
    return out;
}

BaselineResult tabucol_baseline(const UndirectedGraph& g, const CostParams& params,
                                const Rng& rng) {
    params.validate();
    if (g.node_count() == 0) throw std::invalid_argument("tabucol: empty graph");
    const int n = g.node_count();
    const auto ds = dsatur(g);

    BaselineResult out{ds.k, ds.solution, 0};
    for (int attempt = 0, k = ds.k; k >= 1; ++attempt, --k) {
        Rng stream = rng.derive(static_cast<std::uint64_t>(attempt));
        // Greedy construction in random order; a node with no proper color
        // left lands in a random set and starts out clashing. Only clashing
        // nodes ever move afterwards, so the properly placed bulk stays put.
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        stream.shuffle(order);
        std::vector<int> color(static_cast<std::size_t>(n), -1);
        std::vector<char> used(static_cast<std::size_t>(k), 0);
        for (int u : order) {
            std::fill(used.begin(), used.end(), 0);
            for (int w : g.neighbors(u)) {
                const int cw = color[static_cast<std::size_t>(w)];
                if (cw >= 0) used[static_cast<std::size_t>(cw)] = 1;
            }
            int chosen = -1;
            for (int c = 0; c < k; ++c)
                if (!used[static_cast<std::size_t>(c)]) {
                    chosen = c;
                    break;
                }
            if (chosen < 0) chosen = static_cast<int>(stream.below(static_cast<std::uint64_t>(k)));
            color[static_cast<std::size_t>(u)] = chosen;
        }
        auto res = clash_search(std::move(color), g, k, params, stream);
        out.ts_iterations += res.iterations;
        if (!res.success) break;
        out.k = k;
        out.solution = GroupingSolution::from_assignment(k, res.color);
        out.solution.normalize();
    }
    return out;
}

std::string solution_to_text(const GroupingSolution& s, double alpha, double cost) {
    GroupingSolution copy = s;
    copy.normalize();
    std::ostringstream os;
    for (int j = 0; j < copy.k(); ++j) {
        os << 'S' << (j + 1) << ':';
        const auto& set = copy.groups[static_cast<std::size_t>(j)];
        for (std::size_t i = 0; i < set.size(); ++i) os << (i ? "," : " ") << set[i];
        os << '\n';
    }
    os << "U:";
    for (std::size_t i = 0; i < copy.ungrouped.size(); ++i)
        os << (i ? "," : " ") << copy.ungrouped[i];
    os << '\n';
    os << "k=" << copy.k() << " cost=" << format_fixed(cost) << " alpha=" << format_fixed(alpha)
       << '\n';
    return os.str();
}

GroupingSolution solution_from_text(std::istream& is, double* alpha_out, double* cost_out) {
    GroupingSolution s;
    bool saw_pool = false, saw_trailer = false;
    std::string line;
    auto parse_ids = [](const std::string& body) {
        std::vector<int> ids;
        const std::string t = trim(body);
        if (t.empty()) return ids;
        for (const auto& f : split(t, ',')) ids.push_back(static_cast<int>(parse_int(f)));
        return ids;
    };
    while (std::getline(is, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == 'S') {
            const auto colon = t.find(':');
            if (colon == std::string::npos) throw std::runtime_error("solution: bad group line: " + t);
            const int j = static_cast<int>(parse_int(t.substr(1, colon - 1)));
            if (j != static_cast<int>(s.groups.size()) + 1)
                throw std::runtime_error("solution: group lines out of order");
            s.groups.push_back(parse_ids(t.substr(colon + 1)));
        } else if (t[0] == 'U') {
            const auto colon = t.find(':');
            if (colon == std::string::npos) throw std::runtime_error("solution: bad pool line: " + t);
            s.ungrouped = parse_ids(t.substr(colon + 1));
            saw_pool = true;
        } else if (t.rfind("k=", 0) == 0) {
            int k = -1;
            for (const auto& kv : split(t, ' ')) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = kv.substr(0, eq);
                const std::string val = kv.substr(eq + 1);
                if (key == "k") k = static_cast<int>(parse_int(val));
                else if (key == "cost" && cost_out) *cost_out = parse_double(val);
                else if (key == "alpha" && alpha_out) *alpha_out = parse_double(val);
            }
            if (k != s.k()) throw std::runtime_error("solution: trailer k disagrees with group lines");
            saw_trailer = true;
        } else {
            throw std::runtime_error("solution: unrecognized line: " + t);
        }
    }
    if (!saw_pool || !saw_trailer)
        throw std::runtime_error("solution: missing pool line or trailer");
    return s;
}

} // namespace geofl
