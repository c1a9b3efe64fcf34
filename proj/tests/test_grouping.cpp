// Tests for the grouping algorithms: cost function, greedy and DSatur
// colorings, the equitable initializer, the tabu search, early stopping, the
// outer grouping loop, and the complete-coloring baselines.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "geofl/grouping.hpp"
#include "oracles.hpp"

using geofl::CostParams;
using geofl::GroupingSolution;
using geofl::InitMethod;
using geofl::UndirectedGraph;
using geofl::VarianceMode;

namespace {

UndirectedGraph complete(int n) {
    UndirectedGraph g(n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) g.add_edge(a, b);
    return g;
}

UndirectedGraph cycle(int n) {
    UndirectedGraph g(n);
    for (int v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
    return g;
}

UndirectedGraph complete_bipartite(int a, int b) {
    UndirectedGraph g(a + b);
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) g.add_edge(i, a + j);
    return g;
}

GroupingSolution make_solution(std::vector<std::vector<int>> groups, std::vector<int> pool = {}) {
    GroupingSolution s;
    s.groups = std::move(groups);
    s.ungrouped = std::move(pool);
    return s;
}

std::vector<int> sorted_sizes(const GroupingSolution& s) {
    auto sizes = s.group_sizes();
    std::sort(sizes.begin(), sizes.end());
    return sizes;
}

} // namespace

TEST_CASE("solution bookkeeping") {
    auto s = make_solution({{3, 1}, {2}}, {0});
    CHECK(s.k() == 2);
    CHECK(s.total_nodes() == 4);
    CHECK(s.group_sizes() == std::vector<int>{2, 1});

    const auto a = s.to_assignment(4);
    CHECK(a == std::vector<int>{-1, 0, 1, 0});
    const auto back = GroupingSolution::from_assignment(2, a);
    CHECK(back.groups[0] == std::vector<int>{1, 3});
    CHECK(back.ungrouped == std::vector<int>{0});

    s.normalize();
    CHECK(s.groups[0] == std::vector<int>{1, 3});

    CHECK_THROWS_AS((void)make_solution({{0, 0}}).to_assignment(1), std::invalid_argument);
    CHECK_THROWS_AS((void)make_solution({{0}, {0}}).to_assignment(2), std::invalid_argument);
    CHECK_THROWS_AS((void)make_solution({{5}}).to_assignment(3), std::invalid_argument);
}

TEST_CASE("properness check") {
    const auto tri = complete(3);
    CHECK(make_solution({{0}, {1}, {2}}).is_proper(tri));
    CHECK(make_solution({{0}, {1}}, {2}).is_proper(tri)); // pool is exempt
    CHECK_FALSE(make_solution({{0, 1}, {2}}).is_proper(tri));
}

TEST_CASE("size variance and joint cost") {
    const auto even = make_solution({{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11}});
    CHECK(geofl::size_variance(even) == 0.0);
    CHECK(geofl::joint_cost(even, 0.5) == 0.0);

    const auto uneven = make_solution({{0, 1, 2}, {3, 4, 5, 6, 7}}, {8, 9});
    CHECK(geofl::size_variance(uneven) == doctest::Approx(1.0)); // sizes (3,5)
    CHECK(geofl::size_variance(uneven, VarianceMode::sample) == doctest::Approx(2.0));
    CHECK(geofl::joint_cost(uneven, 0.5) == doctest::Approx(1.5));
    CHECK(geofl::joint_cost(uneven, 0.9) == doctest::Approx(1.9));

    CHECK_THROWS_AS((void)geofl::joint_cost(uneven, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)geofl::joint_cost(uneven, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)geofl::joint_cost(make_solution({}), 0.5), std::domain_error);

    // Variance against the textbook formula on random partitions.
    geofl::Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        GroupingSolution s;
        int next = 0;
        const int k = 1 + static_cast<int>(rng.below(6));
        for (int j = 0; j < k; ++j) {
            std::vector<int> grp;
            for (std::size_t c = rng.below(9); c > 0; --c) grp.push_back(next++);
            s.groups.push_back(std::move(grp));
        }
        const auto sizes = s.group_sizes();
        CHECK(geofl::size_variance(s) ==
              doctest::Approx(static_cast<double>(oracle::variance(sizes))).epsilon(1e-12));
        CHECK(geofl::size_variance(s, VarianceMode::sample) ==
              doctest::Approx(static_cast<double>(oracle::variance(sizes, true))).epsilon(1e-12));
    }
}

TEST_CASE("cost params validation") {
    CostParams p;
    CHECK_NOTHROW(p.validate());
    p.alpha = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = CostParams{};
    p.tr = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = CostParams{};
    p.tr = 1.0;
    CHECK_NOTHROW(p.validate());
    p.reves_ws = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("first-fit greedy coloring") {
    const auto edgeless = UndirectedGraph(5);
    std::vector<int> order{0, 1, 2, 3, 4};
    const auto all_one = geofl::greedy_color(edgeless, 1, order);
    CHECK(all_one.groups[0].size() == 5);
    CHECK(all_one.ungrouped.empty());

    const auto tri = complete(3);
    std::vector<int> tri_order{0, 1, 2};
    const auto s = geofl::greedy_color(tri, 2, tri_order);
    CHECK(s.groups[0] == std::vector<int>{0});
    CHECK(s.groups[1] == std::vector<int>{1});
    CHECK(s.ungrouped == std::vector<int>{2});
    CHECK(s.is_proper(tri));

    std::vector<int> bad{0, 0, 1};
    CHECK_THROWS_AS((void)geofl::greedy_color(tri, 2, bad), std::invalid_argument);
}

TEST_CASE("dsatur colors the benchmark families optimally") {
    CHECK(geofl::dsatur(complete(4)).k == 4);
    CHECK(geofl::dsatur(cycle(5)).k == 3);
    CHECK(geofl::dsatur(cycle(7)).k == 3);
    CHECK(geofl::dsatur(complete_bipartite(3, 3)).k == 2);
    CHECK(geofl::dsatur(UndirectedGraph(6)).k == 1);
    CHECK_THROWS_AS((void)geofl::dsatur(UndirectedGraph(0)), std::invalid_argument);
}

TEST_CASE("dsatur output is a complete proper coloring bounded by the oracle") {
    geofl::Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(7));
        const auto g = oracle::random_graph(n, rng.next_unit(), rng);
        const auto res = geofl::dsatur(g);
        CHECK(res.solution.ungrouped.empty());
        CHECK(res.solution.total_nodes() == n);
        CHECK(res.solution.is_proper(g));
        CHECK(res.k >= oracle::chromatic_number(g));
        CHECK(res.k <= n);
    }
}

TEST_CASE("equitable initializer balances and pools only when stuck") {
    const auto even = geofl::elf_greedy(UndirectedGraph(6), 3, 0.5);
    CHECK(sorted_sizes(even.solution) == std::vector<int>{2, 2, 2});
    CHECK(even.cost == 0.0);

    UndirectedGraph star(6); // center 0, leaves 1..5
    for (int v = 1; v < 6; ++v) star.add_edge(0, v);
    const auto st = geofl::elf_greedy(star, 2, 0.5);
    CHECK(st.solution.ungrouped.empty());
    CHECK(st.solution.groups[0] == std::vector<int>{0}); // highest degree placed first
    CHECK(st.solution.groups[1].size() == 5);
    CHECK(st.solution.is_proper(star));

    const auto k4 = geofl::elf_greedy(complete(4), 3, 0.5);
    CHECK(k4.solution.ungrouped.size() == 1);
    CHECK(k4.solution.is_proper(complete(4)));
    CHECK(k4.cost == doctest::Approx(geofl::joint_cost(k4.solution, 0.5)));

    CHECK_THROWS_AS((void)geofl::elf_greedy(UndirectedGraph(3), 0, 0.5), std::invalid_argument);
}

TEST_CASE("early stopping waits for a full, flat window") {
    // Constant stream: the window fills after ws pushes, then p stable checks.
    geofl::RevesMonitor flat(150, 70);
    int stop_at = 0;
    for (int t = 1; t <= 400; ++t)
        if (flat.push(1.0)) {
            stop_at = t;
            break;
        }
    CHECK(stop_at == 220);

    // Strictly decreasing: the minimum moves every iteration.
    geofl::RevesMonitor falling(150, 70);
    bool stopped = false;
    for (int t = 1; t <= 2000 && !stopped; ++t) stopped = falling.push(1000.0 - t);
    CHECK_FALSE(stopped);

    // A dip just before the would-be stop restarts the stability count.
    geofl::RevesMonitor dip(150, 70);
    stop_at = 0;
    for (int t = 1; t <= 600; ++t) {
        const double c = t == 219 ? 0.5 : 1.0;
        if (dip.push(c)) {
            stop_at = t;
            break;
        }
    }
    CHECK(stop_at > 220);

    CHECK_THROWS_AS(geofl::RevesMonitor(0, 5), std::invalid_argument);
    CHECK_THROWS_AS(geofl::RevesMonitor(5, 0), std::invalid_argument);
}

TEST_CASE("tabu search keeps a zero-cost start") {
    CostParams p;
    p.max_ts_iterations = 300;
    geofl::Rng rng(1);
    const auto start = make_solution({{0, 1}, {2, 3}});
    const auto res = geofl::modified_tabu_search(start, UndirectedGraph(4), p, rng);
    CHECK(res.cost == 0.0);
    CHECK(res.solution.ungrouped.empty());
}

TEST_CASE("tabu search rebalances an uneven edgeless start to the variance floor") {
    CostParams p;
    geofl::Rng rng(2);
    const auto start = make_solution({{0, 1, 2, 3, 4}, {5}, {6}});
    const auto res = geofl::modified_tabu_search(start, UndirectedGraph(7), p, rng);
    CHECK(sorted_sizes(res.solution) == std::vector<int>{2, 2, 3});
    CHECK(res.solution.ungrouped.empty());
    CHECK(res.cost == doctest::Approx(0.5 * 2.0 / 9.0)); // population variance of (3,2,2)
}

TEST_CASE("tabu search completes a partial triangle coloring") {
    CostParams p;
    geofl::Rng rng(3);
    const auto tri = complete(3);
    const auto start = make_solution({{0}, {1}, {}}, {2});
    const auto res = geofl::modified_tabu_search(start, tri, p, rng);
    CHECK(res.cost == 0.0);
    CHECK(res.solution.ungrouped.empty());
    CHECK(res.solution.is_proper(tri));
}

TEST_CASE("tabu search rejects a broken start") {
    CostParams p;
    geofl::Rng rng(4);
    const auto tri = complete(3);
    CHECK_THROWS_AS(
        (void)geofl::modified_tabu_search(make_solution({{0, 1}, {2}}), tri, p, rng),
        std::invalid_argument);
    CHECK_THROWS_AS((void)geofl::modified_tabu_search(make_solution({}), tri, p, rng),
                    std::invalid_argument);
}

TEST_CASE("tabu search survives its own audit on random graphs") {
    CostParams p;
    p.validate_moves = true;
    p.max_ts_iterations = 500;
    geofl::Rng seed_rng(19);
    for (int trial = 0; trial < 5; ++trial) {
        geofl::Rng rng(seed_rng.next_u64());
        const auto g = oracle::random_graph(30, 0.3, rng);
        const int k = std::max(1, geofl::dsatur(g).k - 1);
        const auto start = geofl::elf_greedy(g, k, p.alpha).solution;
        const auto res = geofl::modified_tabu_search(start, g, p, rng);
        CHECK(res.solution.is_proper(g));
        CHECK(res.solution.total_nodes() == 30);
        CHECK(res.cost <= geofl::joint_cost(start, p.alpha) + 1e-12);
        CHECK(res.cost == doctest::Approx(geofl::joint_cost(res.solution, p.alpha)));
    }
}

TEST_CASE("random placement mode still yields proper solutions") {
    CostParams p;
    p.random_placement = true;
    p.max_ts_iterations = 400;
    geofl::Rng rng(23);
    const auto g = oracle::random_graph(20, 0.3, rng);
    const auto start = geofl::elf_greedy(g, geofl::dsatur(g).k, p.alpha).solution;
    const auto res = geofl::modified_tabu_search(start, g, p, rng);
    CHECK(res.solution.is_proper(g));
    CHECK(res.solution.total_nodes() == 20);
}

TEST_CASE("the grouping loop cannot descend below a clique's group count") {
    CostParams p;
    geofl::Rng rng(29);
    const auto res = geofl::psg(complete(5), p, rng);
    CHECK(res.solution.ungrouped.empty());
    CHECK(res.solution.k() == 5);
    CHECK(res.k_history.front().first == 5);
}

TEST_CASE("the grouping loop floors at one group") {
    CostParams p;
    geofl::Rng rng(31);
    const auto res = geofl::psg(UndirectedGraph(12), p, rng);
    CHECK(res.solution.k() == 1);
    CHECK(res.cost == 0.0);
    CHECK(res.solution.groups[0].size() == 12);
}

TEST_CASE("grouping outcomes are deterministic and self-consistent") {
    CostParams p;
    geofl::Rng graph_rng(37);
    const auto g = oracle::random_graph(40, 0.25, graph_rng);
    const auto a = geofl::psg(g, p, geofl::Rng(99));
    const auto b = geofl::psg(g, p, geofl::Rng(99));
    CHECK(a.cost == b.cost);
    CHECK(a.ts_iterations == b.ts_iterations);
    CHECK(a.k_history == b.k_history);
    auto na = a.solution, nb = b.solution;
    na.normalize();
    nb.normalize();
    CHECK(na.groups == nb.groups);
    CHECK(na.ungrouped == nb.ungrouped);

    CHECK(a.solution.is_proper(g));
    CHECK(a.cost == doctest::Approx(geofl::joint_cost(a.solution, p.alpha)));
    CHECK(a.solution.total_nodes() == 40);
}

TEST_CASE("a light descent threshold never beats a permissive one") {
    geofl::Rng graph_rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        const auto g = oracle::random_graph(35, 0.3, graph_rng);
        CostParams loose;
        loose.tr = 0.7;
        CostParams tight;
        tight.tr = 0.1;
        const double c_loose = geofl::psg(g, loose, geofl::Rng(1000 + trial)).cost;
        const double c_tight = geofl::psg(g, tight, geofl::Rng(1000 + trial)).cost;
        CHECK(c_tight >= c_loose - 1e-12);
    }
}

TEST_CASE("pool-emptying baseline contracts") {
    CostParams p;
    const auto k4 = geofl::partialcol_baseline(complete(4), p, geofl::Rng(5));
    CHECK(k4.k == 4);
    CHECK(k4.solution.ungrouped.empty());

    const auto free6 = geofl::partialcol_baseline(UndirectedGraph(6), p, geofl::Rng(6));
    CHECK(free6.k == 1);
    CHECK(free6.solution.groups[0].size() == 6);

    geofl::Rng graph_rng(43);
    for (int trial = 0; trial < 5; ++trial) {
        const auto g = oracle::random_graph(12, 0.35, graph_rng);
        const int chi = oracle::chromatic_number(g);
        for (auto init : {InitMethod::random_greedy, InitMethod::elf}) {
            const auto res = geofl::partialcol_baseline(g, p, geofl::Rng(70 + trial), init);
            CHECK(res.solution.ungrouped.empty());
            CHECK(res.solution.total_nodes() == 12);
            CHECK(res.solution.is_proper(g));
            CHECK(res.k == res.solution.k());
            CHECK(res.k >= chi);
        }
    }
}

TEST_CASE("clash-repair baseline contracts") {
    CostParams p;
    UndirectedGraph pair(2);
    pair.add_edge(0, 1);
    CHECK(geofl::tabucol_baseline(pair, p, geofl::Rng(7)).k == 2);

    const auto c5 = geofl::tabucol_baseline(cycle(5), p, geofl::Rng(8));
    CHECK(c5.k == 3);
    CHECK(c5.solution.is_proper(cycle(5)));

    geofl::Rng graph_rng(47);
    for (int trial = 0; trial < 5; ++trial) {
        const auto g = oracle::random_graph(25, 0.35, graph_rng);
        const auto res = geofl::tabucol_baseline(g, p, geofl::Rng(90 + trial));
        CHECK(res.solution.ungrouped.empty());
        CHECK(res.solution.total_nodes() == 25);
        CHECK(res.solution.is_proper(g)); // zero clashes
    }
}

TEST_CASE("solution text round-trip") {
    auto s = make_solution({{2, 0}, {1}}, {3});
    const auto text = geofl::solution_to_text(s, 0.5, 1.25);
    CHECK(text == "S1: 0,2\nS2: 1\nU: 3\nk=2 cost=1.250000 alpha=0.500000\n");

    std::istringstream is(text);
    double alpha = 0, cost = 0;
    const auto back = geofl::solution_from_text(is, &alpha, &cost);
    CHECK(back.groups == std::vector<std::vector<int>>{{0, 2}, {1}});
    CHECK(back.ungrouped == std::vector<int>{3});
    CHECK(alpha == 0.5);
    CHECK(cost == 1.25);

    std::istringstream shuffled("S2: 1\nS1: 0\nU:\nk=2 cost=0.000000 alpha=0.500000\n");
    CHECK_THROWS_AS((void)geofl::solution_from_text(shuffled), std::runtime_error);
    std::istringstream mismatched("S1: 0\nU:\nk=3 cost=0.000000 alpha=0.500000\n");
    CHECK_THROWS_AS((void)geofl::solution_from_text(mismatched), std::runtime_error);
}
