// Acceptance gate: one line of output per criterion, nonzero exit if any
// fails. Criteria 1-5 are structural (properness, audited search moves,
// coloring and numeric oracles, CLI determinism); 6-10 are the quantitative
// relationships the grouping study is expected to show at desk scale.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "geofl/harness.hpp"
#include "geofl/text.hpp"
#include "oracles.hpp"

using namespace geofl;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::printf("criterion %2d %s  %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) { return format_fixed(v, 4); }

struct ClusteredInstance {
    Deployment deployment;
    SuitabilityResult suitability;
    UndirectedGraph g_prime;
    std::uint64_t seed;
};

ClusteredInstance cluster_instance(const Scenario& s, std::uint64_t seed) {
    for (;; ++seed) {
        try {
            ClusteredInstance inst{generate_deployment(s, seed),
                                   SuitabilityResult{{}, {}, UndirectedGraph(0), {}},
                                   UndirectedGraph(0), seed};
            inst.suitability = dynamic_clustering(inst.deployment, ClusterSpec::for_scenario(s));
            inst.g_prime = inst.suitability.graph.complement();
            return inst;
        } catch (const std::runtime_error&) {
            // empty or too-sparse draw; take the next seed
        }
    }
}

// Every same-group pair must be pairing-suitable, recomputed from the raw
// traces rather than read back from the graph.
bool groups_respect_pairing(const ClusteredInstance& inst, const GroupingSolution& sol,
                            const ClusterSpec& spec) {
    for (const auto& grp : sol.groups)
        for (std::size_t a = 0; a < grp.size(); ++a)
            for (std::size_t b = a + 1; b < grp.size(); ++b) {
                const int ia = inst.suitability.suitable_ids[static_cast<std::size_t>(grp[a])];
                const int ib = inst.suitability.suitable_ids[static_cast<std::size_t>(grp[b])];
                const double ps = pairing_suitability(
                    inst.deployment.traces[static_cast<std::size_t>(ia)],
                    inst.deployment.traces[static_cast<std::size_t>(ib)], spec);
                if (ps < spec.xi_ps) return false;
            }
    return true;
}

GroupingSolution run_algorithm(const std::string& algo, const UndirectedGraph& g_prime,
                               const CostParams& params, std::uint64_t seed) {
    const Rng rng(seed);
    if (algo == "psg") return psg(g_prime, params, rng).solution;
    if (algo == "partialcol") return partialcol_baseline(g_prime, params, rng).solution;
    if (algo == "tabucol") return tabucol_baseline(g_prime, params, rng).solution;
    if (algo == "dsatur") return dsatur(g_prime).solution;
    if (algo == "elf-greedy")
        return elf_greedy(g_prime, dsatur(g_prime).k, params.alpha, params.variance_mode).solution;
    throw std::logic_error("unknown algorithm in acceptance run");
}

void criterion_properness() {
    const std::vector<std::string> scenarios{"dense", "moderate", "sparse"};
    const std::vector<std::string> algorithms{"psg", "partialcol", "tabucol", "dsatur",
                                             "elf-greedy"};
    CostParams params;
    int checked = 0, violations = 0;
    for (int i = 0; i < 50; ++i) {
        const auto scenario = preset_scenario(scenarios[static_cast<std::size_t>(i % 3)]);
        const auto& algo = algorithms[static_cast<std::size_t>(i % 5)];
        const auto inst = cluster_instance(scenario, 20000 + static_cast<std::uint64_t>(i));
        const auto spec = ClusterSpec::for_scenario(scenario);
        const auto sol = run_algorithm(algo, inst.g_prime, params, 555000 + i);

        ++checked;
        if (!sol.is_proper(inst.g_prime)) ++violations;
        if (sol.total_nodes() != inst.g_prime.node_count()) ++violations;
        if (!groups_respect_pairing(inst, sol, spec)) ++violations;
    }
    report(1, checked == 50 && violations == 0,
           "properness and pairing-suitability across 50 runs, violations=" +
               std::to_string(violations));
}

void criterion_audited_search() {
    Rng rng(4242);
    const auto g = oracle::random_graph(100, 0.3, rng);
    CostParams params;
    params.validate_moves = true;
    params.max_ts_iterations = 1000;
    const int k = std::max(1, dsatur(g).k - 1);
    const auto start = elf_greedy(g, k, params.alpha).solution;
    bool pass = true;
    std::string note = "1000 audited moves on a 100-node graph";
    try {
        const auto res = modified_tabu_search(start, g, params, rng);
        pass = res.iterations == 1000 && res.solution.is_proper(g) &&
               res.solution.total_nodes() == 100;
    } catch (const std::exception& e) {
        pass = false;
        note += std::string(", audit tripped: ") + e.what();
    }
    report(2, pass, note);
}

void criterion_coloring_oracles() {
    CostParams params;
    int wrong = 0;
    std::ostringstream note;

    auto check = [&](const UndirectedGraph& g, const std::string& name) {
        const int chi = oracle::chromatic_number(g);
        const int ds = dsatur(g).k;
        const int pc = partialcol_baseline(g, params, Rng(7)).k;
        const int tc = tabucol_baseline(g, params, Rng(7)).k;
        if (ds != chi || pc != chi || tc != chi) {
            ++wrong;
            note << ' ' << name << "(chi=" << chi << " ds=" << ds << " pc=" << pc
                 << " tc=" << tc << ')';
        }
    };

    for (int n = 2; n <= 6; ++n) {
        UndirectedGraph kn(n);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) kn.add_edge(a, b);
        check(kn, "K" + std::to_string(n));
    }
    for (int n : {5, 7}) {
        UndirectedGraph cn(n);
        for (int v = 0; v < n; ++v) cn.add_edge(v, (v + 1) % n);
        check(cn, "C" + std::to_string(n));
    }
    UndirectedGraph k33(6);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) k33.add_edge(i, 3 + j);
    check(k33, "K3,3");

    report(3, wrong == 0, "cliques, odd cycles, K3,3 vs exhaustive chromatic numbers" + note.str());
}

void criterion_numeric_oracles() {
    Rng rng(2026);
    int bad_kl = 0, bad_rho = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int bins = 2 + static_cast<int>(rng.below(7));
        Histogram p, q;
        for (int b = 0; b <= bins; ++b) {
            p.edges.push_back(b);
            q.edges.push_back(b);
        }
        double psum = 0, qsum = 0;
        for (int b = 0; b < bins; ++b) {
            p.probs.push_back(rng.below(4) == 0 ? 0.0 : rng.next_unit());
            q.probs.push_back(rng.below(4) == 0 ? 0.0 : rng.next_unit());
            psum += p.probs.back();
            qsum += q.probs.back();
        }
        if (psum == 0 || qsum == 0) continue;
        for (auto& v : p.probs) v /= psum;
        for (auto& v : q.probs) v /= qsum;
        const double kl = kl_divergence(p, q);
        if (kl < 0 || std::fabs(kl - static_cast<double>(oracle::kl(p.probs, q.probs))) > 1e-9)
            ++bad_kl;
    }
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + rng.below(60);
        std::vector<double> x, y;
        for (std::size_t i = 0; i < n; ++i) {
            x.push_back(rng.uniform(-100, 100));
            y.push_back(rng.uniform(-100, 100) + 0.3 * x.back());
        }
        const double rho = pearson(x, y);
        if (rho < -1 || rho > 1 ||
            std::fabs(rho - static_cast<double>(oracle::pearson(x, y))) > 1e-9)
            ++bad_rho;
    }
    report(4, bad_kl == 0 && bad_rho == 0,
           "KL and correlation vs long double compensated oracles, mismatches=" +
               std::to_string(bad_kl + bad_rho));
}

void criterion_cli_determinism(const std::string& cli) {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path();
    const auto out1 = (dir / "acceptance_sim_a.csv").string();
    const auto out2 = (dir / "acceptance_sim_b.csv").string();
    const std::string flags = " simulate --scenario dense --algo psg --alpha 0.5 --tr 0.7"
                              " --realizations 2 --repetitions 2 --seed 424242 --out ";
    const int rc1 = std::system((cli + flags + out1).c_str());
    const int rc2 = std::system((cli + flags + out2).c_str());

    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const auto a = slurp(out1), b = slurp(out2);
    const bool pass = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
    report(5, pass,
           "two identical simulate invocations, " + std::to_string(a.size()) + " bytes each, " +
               (a == b ? "byte-identical" : "DIFFER"));
}

struct ScenarioSummary {
    double psg_cost_07 = 0, psg_cost_01 = 0, psg_k_07 = 0;
    double best_baseline_cost = 0, best_baseline_k = 0;
};

ScenarioSummary comparison_grid(const std::string& name) {
    const auto cfg = resolve_scenario(name);
    ExperimentPlan plan;
    plan.scenario_name = name;
    plan.scenario = cfg.scenario;
    plan.base_params = cfg.params;
    plan.algorithms = {"psg", "dsatur", "partialcol", "tabucol"};
    plan.alphas = {0.5};
    plan.trs = {0.7};
    plan.realizations = 20;
    plan.repetitions = 20;
    plan.base_seed = 1;
    const auto summary = aggregate(run_plan(plan));

    // The tr=0.1 sweep runs as its own single-tr plan: with one tr per plan
    // every (realization, repetition) cell derives the same stream as its
    // tr=0.7 twin, so criterion 10 compares paired runs, not independent ones.
    ExperimentPlan tight = plan;
    tight.algorithms = {"psg"};
    tight.trs = {0.1};
    const auto tight_summary = aggregate(run_plan(tight));

    ScenarioSummary out;
    out.best_baseline_cost = 1e300;
    out.best_baseline_k = 1e300;
    for (const auto& row : summary) {
        if (row.algorithm == "psg") {
            out.psg_cost_07 = row.mean_cost;
            out.psg_k_07 = row.mean_k;
        } else {
            out.best_baseline_cost = std::min(out.best_baseline_cost, row.mean_cost);
            out.best_baseline_k = std::min(out.best_baseline_k, row.mean_k);
        }
    }
    for (const auto& row : tight_summary)
        if (row.algorithm == "psg") out.psg_cost_01 = row.mean_cost;
    return out;
}

// Criterion 10 shares the comparison grid with 6 and 7 but reports last, so
// the verdict is carried out of this function.
struct TrVerdict {
    bool pass = true;
    std::string note;
};

TrVerdict criteria_comparison() {
    bool sep_pass = true, gap_pass = true;
    std::ostringstream sep_note, gap_note, tr_note;
    TrVerdict tr;
    for (const auto* name : {"dense", "moderate", "sparse"}) {
        const auto s = comparison_grid(name);
        const double ratio = s.best_baseline_cost / s.psg_cost_07;
        if (s.psg_cost_07 > s.best_baseline_cost / 20.0) sep_pass = false;
        if (std::string(name) == "moderate" && s.psg_cost_07 >= 1.0) sep_pass = false;
        sep_note << ' ' << name << ": psg=" << fmt(s.psg_cost_07)
                 << " best-baseline=" << fmt(s.best_baseline_cost) << " (" << fmt(ratio) << "x)";

        if (s.psg_k_07 > s.best_baseline_k + 1.5) gap_pass = false;
        gap_note << ' ' << name << ": psg-k=" << fmt(s.psg_k_07)
                 << " best-baseline-k=" << fmt(s.best_baseline_k);

        if (s.psg_cost_01 + 1e-12 < s.psg_cost_07) tr.pass = false;
        tr_note << ' ' << name << ": cost(0.1)=" << fmt(s.psg_cost_01)
                << " cost(0.7)=" << fmt(s.psg_cost_07);
    }
    report(6, sep_pass, "20x cost separation at alpha=0.5, 20x20 grid:" + sep_note.str());
    report(7, gap_pass, "group-count gap at most 1.5:" + gap_note.str());
    tr.note = "tighter tr never cheapens the solution, paired seeds:" + tr_note.str();
    return tr;
}

void criterion_ablation() {
    bool pass = true;
    std::ostringstream note;
    for (const auto* name : {"dense", "moderate", "sparse"}) {
        const auto cfg = resolve_scenario(name);
        ExperimentPlan plan;
        plan.scenario_name = name;
        plan.scenario = cfg.scenario;
        plan.base_params = cfg.params;
        plan.realizations = 20;
        plan.repetitions = 20;
        plan.base_seed = 1;
        const auto rows = ablation_experiment(plan);

        const auto& elf = rows[1];      // + equitable init
        const auto& modts = rows[2];    // + joint-cost search, tr=0.7
        if (elf.cost_delta_pct > -50.0 || std::fabs(elf.groups_delta_pct) > 1.0) pass = false;
        if (modts.cost_delta_pct > -70.0 || modts.groups_delta_pct > 12.0) pass = false;
        note << ' ' << name << ": elf " << fmt(elf.cost_delta_pct) << "% cost / "
             << fmt(elf.groups_delta_pct) << "% groups, modts " << fmt(modts.cost_delta_pct)
             << "% cost / " << fmt(modts.groups_delta_pct) << "% groups";
    }
    report(8, pass, "component ablation directions:" + note.str());
}

void criterion_early_stopping() {
    bool pass = true;
    std::ostringstream note;
    for (const auto* name : {"dense", "moderate", "sparse"}) {
        const auto cfg = resolve_scenario(name);
        ExperimentPlan plan;
        plan.scenario_name = name;
        plan.scenario = cfg.scenario;
        plan.base_params = cfg.params;
        plan.realizations = 20;
        plan.repetitions = 20;
        plan.base_seed = 1;
        const auto rows = reves_experiment(plan);

        const auto& groups = rows[0];
        const auto& cost = rows[1];
        const auto& iters = rows[2];
        if (iters.change_pct > -50.0) pass = false;
        if (cost.change_pct > 30.0) pass = false;
        if (std::fabs(groups.change_pct) > 1.0) pass = false;
        note << ' ' << name << ": iterations " << fmt(iters.change_pct) << "%, cost "
             << fmt(cost.change_pct) << "%, groups " << fmt(groups.change_pct) << '%';
    }
    report(9, pass, "early stopping saves iterations without hurting solutions:" + note.str());
}

} // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
    if (cli.empty()) {
        std::fprintf(stderr, "usage: acceptance --cli <path-to-geofl-binary>\n");
        return 2;
    }

    criterion_properness();
    criterion_audited_search();
    criterion_coloring_oracles();
    criterion_numeric_oracles();
    criterion_cli_determinism(cli);
    const auto tr = criteria_comparison();
    criterion_ablation();
    criterion_early_stopping();
    report(10, tr.pass, tr.note);

    if (failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
