#include "geofl/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "geofl/text.hpp"

namespace geofl {

namespace {

const std::set<std::string> kKnownAlgorithms = {
    "psg", "psg-greedy", "partialcol", "partialcol-elf", "tabucol", "dsatur", "elf-greedy"};

bool uses_tr(const std::string& algorithm) {
    return algorithm == "psg" || algorithm == "psg-greedy";
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

struct CellOutcome {
    int k = 0;
    double cost = 0.0;
    int ungrouped = 0;
    double evenness = 0.0;
    long long ts_iterations = 0;
};

CellOutcome outcome_of(const GroupingSolution& s, double alpha, VarianceMode mode,
                       long long iterations) {
    CellOutcome o;
    o.k = s.k();
    o.ungrouped = static_cast<int>(s.ungrouped.size());
    o.evenness = size_variance(s, mode);
    o.cost = joint_cost(s, alpha, mode);
    o.ts_iterations = iterations;
    return o;
}

CellOutcome run_cell(const std::string& algorithm, const UndirectedGraph& gp,
                     const CostParams& params, std::uint64_t seed) {
    Rng rng(seed);
    if (algorithm == "psg") {
        auto r = psg(gp, params, rng);
        return outcome_of(r.solution, params.alpha, params.variance_mode, r.ts_iterations);
    }
    if (algorithm == "psg-greedy") {
        auto r = psg(gp, params, rng, InitMethod::random_greedy);
        return outcome_of(r.solution, params.alpha, params.variance_mode, r.ts_iterations);
    }
    if (algorithm == "partialcol") {
        auto r = partialcol_baseline(gp, params, rng);
        return outcome_of(r.solution, params.alpha, params.variance_mode, r.ts_iterations);
    }
    if (algorithm == "partialcol-elf") {
        auto r = partialcol_baseline(gp, params, rng, InitMethod::elf);
        return outcome_of(r.solution, params.alpha, params.variance_mode, r.ts_iterations);
    }
    if (algorithm == "tabucol") {
        auto r = tabucol_baseline(gp, params, rng);
        return outcome_of(r.solution, params.alpha, params.variance_mode, r.ts_iterations);
    }
    if (algorithm == "dsatur") {
        auto r = dsatur(gp);
        return outcome_of(r.solution, params.alpha, params.variance_mode, 0);
    }
    if (algorithm == "elf-greedy") {
        const int k = dsatur(gp).k;
        auto r = elf_greedy(gp, k, params.alpha, params.variance_mode);
        return outcome_of(r.solution, params.alpha, params.variance_mode, 0);
    }
    throw std::invalid_argument("unknown algorithm: " + algorithm);
}

ExperimentPlan single_alpha_plan(const ExperimentPlan& base, std::vector<std::string> algorithms,
                                 std::vector<double> trs, std::vector<double> alphas) {
    ExperimentPlan p = base;
    p.algorithms = std::move(algorithms);
    p.trs = std::move(trs);
    p.alphas = std::move(alphas);
    return p;
}

const SummaryRow& find_row(const std::vector<SummaryRow>& rows, const std::string& algorithm,
                           double alpha, double tr) {
    for (const auto& r : rows)
        if (r.algorithm == algorithm && r.alpha == alpha && r.tr == tr) return r;
    throw std::logic_error("summary row missing for " + algorithm);
}

double pct_change(double from, double to) {
    return from == 0.0 ? 0.0 : (to - from) / from * 100.0;
}

} // namespace

void ExperimentPlan::validate() const {
    scenario.validate();
    if (scenario_name.empty()) throw std::invalid_argument("plan: scenario_name required");
    if (realizations < 1 || repetitions < 1)
        throw std::invalid_argument("plan: realizations and repetitions must be >= 1");
    if (algorithms.empty()) throw std::invalid_argument("plan: no algorithms");
    for (const auto& a : algorithms)
        if (!kKnownAlgorithms.count(a)) throw std::invalid_argument("unknown algorithm: " + a);
    if (alphas.empty()) throw std::invalid_argument("plan: no alpha values");
    for (double a : alphas)
        if (!(a > 0.0) || !(a < 1.0)) throw std::invalid_argument("plan: alpha must be in (0, 1)");
    bool any_tr = false;
    for (const auto& a : algorithms) any_tr = any_tr || uses_tr(a);
    if (any_tr) {
        if (trs.empty()) throw std::invalid_argument("plan: no tr values");
        for (double t : trs)
            if (!(t > 0.0) || t > 1.0) throw std::invalid_argument("plan: tr must be in (0, 1]");
    }
    if (!(xi_cs >= 0.0) || xi_cs > 1.0 || !(xi_ps >= 0.0) || xi_ps > 1.0)
        throw std::invalid_argument("plan: thresholds must be in [0, 1]");
}

std::uint64_t cell_seed(std::uint64_t base_seed, int realization, int repetition,
                        const std::string& algorithm, int alpha_index, int tr_index) {
    std::uint64_t s = base_seed;
    s = mix_seed(s, static_cast<std::uint64_t>(realization));
    s = mix_seed(s, static_cast<std::uint64_t>(repetition));
    s = mix_seed(s, fnv1a(algorithm));
    s = mix_seed(s, static_cast<std::uint64_t>(alpha_index));
    s = mix_seed(s, static_cast<std::uint64_t>(tr_index));
    return s;
}

std::uint64_t realization_seed(std::uint64_t base_seed, int realization) {
    return base_seed ^ mix64(static_cast<std::uint64_t>(realization));
}

std::vector<ExperimentRecord> run_plan(const ExperimentPlan& plan) {
    plan.validate();
    std::vector<ExperimentRecord> records;

    for (int r = 0; r < plan.realizations; ++r) {
        const UndirectedGraph* gp = nullptr;
        UndirectedGraph grouping_graph(0);
        std::string skip_reason;
        try {
            const auto deployment =
                generate_deployment(plan.scenario, realization_seed(plan.base_seed, r));
            const auto spec = ClusterSpec::for_scenario(plan.scenario, plan.xi_cs, plan.xi_ps);
            const auto suitability = dynamic_clustering(deployment, spec);
            grouping_graph = suitability.graph.complement();
            gp = &grouping_graph;
        } catch (const std::runtime_error& e) {
            skip_reason = e.what();
        }

        for (const auto& algorithm : plan.algorithms) {
            const std::vector<double> trs = uses_tr(algorithm) ? plan.trs : std::vector<double>{0.0};
            for (std::size_t ai = 0; ai < plan.alphas.size(); ++ai) {
                for (std::size_t ti = 0; ti < trs.size(); ++ti) {
                    for (int q = 0; q < plan.repetitions; ++q) {
                        ExperimentRecord rec;
                        rec.scenario = plan.scenario_name;
                        rec.algorithm = algorithm;
                        rec.alpha = plan.alphas[ai];
                        rec.tr = trs[ti];
                        rec.realization = r;
                        rec.repetition = q;
                        rec.seed = cell_seed(plan.base_seed, r, q, algorithm,
                                             static_cast<int>(ai), static_cast<int>(ti));
                        if (!skip_reason.empty()) {
                            rec.skip_reason = skip_reason;
                            records.push_back(std::move(rec));
                            continue;
                        }
                        CostParams params = plan.base_params;
                        params.alpha = rec.alpha;
                        if (uses_tr(algorithm)) params.tr = rec.tr;
                        const auto t0 = std::chrono::steady_clock::now();
                        const auto cell = run_cell(algorithm, *gp, params, rec.seed);
                        const auto t1 = std::chrono::steady_clock::now();
                        rec.k = cell.k;
                        rec.cost = cell.cost;
                        rec.ungrouped = cell.ungrouped;
                        rec.evenness = cell.evenness;
                        rec.ts_iterations = cell.ts_iterations;
                        if (plan.measure_time)
                            rec.wall_time_ms =
                                std::chrono::duration<double, std::milli>(t1 - t0).count();
                        const double recomputed =
                            rec.alpha * rec.ungrouped + (1.0 - rec.alpha) * rec.evenness;
                        if (std::abs(recomputed - rec.cost) > 1e-9)
                            throw std::logic_error("record cost disagrees with its components");
                        records.push_back(std::move(rec));
                    }
                }
            }
        }
    }
    return records;
}

namespace {

std::tuple<std::string, std::string, double, double, int, int> record_key(const ExperimentRecord& r) {
    return {r.scenario, r.algorithm, r.alpha, r.tr, r.realization, r.repetition};
}

} // namespace

std::vector<SummaryRow> aggregate(const std::vector<ExperimentRecord>& records) {
    std::map<std::tuple<std::string, std::string, double, double>, SummaryRow> cells;
    for (const auto& r : records) {
        auto& row = cells[{r.scenario, r.algorithm, r.alpha, r.tr}];
        if (row.runs == 0 && row.skips == 0) {
            row.scenario = r.scenario;
            row.algorithm = r.algorithm;
            row.alpha = r.alpha;
            row.tr = r.tr;
        }
        if (!r.skip_reason.empty()) {
            ++row.skips;
            continue;
        }
        ++row.runs;
        row.mean_k += r.k;
        row.mean_cost += r.cost;
        row.mean_ungrouped += r.ungrouped;
        row.mean_evenness += r.evenness;
        row.mean_ts_iterations += static_cast<double>(r.ts_iterations);
    }
    std::vector<SummaryRow> out;
    out.reserve(cells.size());
    for (auto& [key, row] : cells) {
        if (row.runs > 0) {
            row.mean_k /= row.runs;
            row.mean_cost /= row.runs;
            row.mean_ungrouped /= row.runs;
            row.mean_evenness /= row.runs;
            row.mean_ts_iterations /= row.runs;
        }
        out.push_back(std::move(row));
    }
    return out;
}

void write_records_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
    std::vector<const ExperimentRecord*> rows;
    rows.reserve(records.size());
    for (const auto& r : records)
        if (r.skip_reason.empty()) rows.push_back(&r);
    std::sort(rows.begin(), rows.end(), [](const ExperimentRecord* a, const ExperimentRecord* b) {
        return record_key(*a) < record_key(*b);
    });
    os << "scenario,algorithm,alpha,tr,realization,repetition,k,cost,ungrouped,evenness,"
          "ts_iterations,wall_time_ms,seed\n";
    for (const auto* r : rows) {
        os << r->scenario << ',' << r->algorithm << ',' << format_fixed(r->alpha) << ','
           << format_fixed(r->tr) << ',' << r->realization << ',' << r->repetition << ',' << r->k
           << ',' << format_fixed(r->cost) << ',' << r->ungrouped << ','
           << format_fixed(r->evenness) << ',' << r->ts_iterations << ','
           << format_fixed(r->wall_time_ms) << ',' << r->seed << '\n';
    }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "scenario,algorithm,alpha,tr,mean_k,mean_cost,mean_ungrouped,mean_evenness,"
          "mean_ts_iterations,runs,skips\n";
    for (const auto& r : rows) {
        os << r.scenario << ',' << r.algorithm << ',' << format_fixed(r.alpha) << ','
           << format_fixed(r.tr) << ',' << format_fixed(r.mean_k) << ','
           << format_fixed(r.mean_cost) << ',' << format_fixed(r.mean_ungrouped) << ','
           << format_fixed(r.mean_evenness) << ',' << format_fixed(r.mean_ts_iterations) << ','
           << r.runs << ',' << r.skips << '\n';
    }
}

std::vector<AblationRow> ablation_experiment(const ExperimentPlan& base) {
    auto plan = single_alpha_plan(base, {"partialcol", "partialcol-elf", "psg-greedy"},
                                  {0.7, 0.1}, {0.5});
    const auto rows = aggregate(run_plan(plan));
    const auto& pc = find_row(rows, "partialcol", 0.5, 0.0);
    const auto& elf = find_row(rows, "partialcol-elf", 0.5, 0.0);
    const auto& ts07 = find_row(rows, "psg-greedy", 0.5, 0.7);
    const auto& ts01 = find_row(rows, "psg-greedy", 0.5, 0.1);

    std::vector<AblationRow> out;
    out.push_back({"partialcol", pc.mean_k, pc.mean_cost, 0.0, 0.0});
    for (const auto* r : {&elf, &ts07, &ts01}) {
        std::string variant = r->algorithm == "partialcol-elf"
                                  ? "partialcol+elf"
                                  : "partialcol+modts tr=" + format_fixed(r->tr, 1);
        out.push_back({std::move(variant), r->mean_k, r->mean_cost,
                       pct_change(pc.mean_k, r->mean_k), pct_change(pc.mean_cost, r->mean_cost)});
    }
    return out;
}

void write_ablation_csv(std::ostream& os, const std::vector<AblationRow>& rows) {
    os << "variant,groups,cost,groups_delta_pct,cost_delta_pct\n";
    for (const auto& r : rows)
        os << r.variant << ',' << format_fixed(r.groups) << ',' << format_fixed(r.cost) << ','
           << format_fixed(r.groups_delta_pct) << ',' << format_fixed(r.cost_delta_pct) << '\n';
}

std::vector<CompareRow> compare_experiment(const ExperimentPlan& base) {
    auto plan = single_alpha_plan(base, {"psg", "dsatur", "partialcol", "tabucol"},
                                  {0.7, 0.4, 0.1}, {0.5});
    const auto rows = aggregate(run_plan(plan));
    std::vector<CompareRow> out;
    for (double tr : {0.7, 0.4, 0.1}) {
        const auto& r = find_row(rows, "psg", 0.5, tr);
        out.push_back({"psg(tr=" + format_fixed(tr, 1) + ")", r.mean_k, r.mean_cost});
    }
    for (const char* algorithm : {"dsatur", "partialcol", "tabucol"}) {
        const auto& r = find_row(rows, algorithm, 0.5, 0.0);
        out.push_back({algorithm, r.mean_k, r.mean_cost});
    }
    return out;
}

void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows) {
    os << "algorithm,groups,cost\n";
    for (const auto& r : rows)
        os << r.algorithm << ',' << format_fixed(r.groups) << ',' << format_fixed(r.cost) << '\n';
}

std::vector<RevesRow> reves_experiment(const ExperimentPlan& base) {
    const std::vector<double> alphas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    auto plan = single_alpha_plan(base, {"psg"}, {0.7}, alphas);
    // The stopping study runs the search in randomized-placement mode. Greedy
    // placement keeps finding rare late improvements right up to the budget,
    // so truncating it measures the tail's worth, not the stopping rule.
    plan.base_params.random_placement = true;

    auto averaged = [&](bool stop_enabled) {
        ExperimentPlan p = plan;
        p.base_params.reves_enabled = stop_enabled;
        const auto rows = aggregate(run_plan(p));
        double k = 0.0, cost = 0.0, iters = 0.0;
        for (double a : alphas) {
            const auto& r = find_row(rows, "psg", a, 0.7);
            k += r.mean_k;
            cost += r.mean_cost;
            iters += r.mean_ts_iterations;
        }
        const double m = static_cast<double>(alphas.size());
        return std::tuple{k / m, cost / m, iters / m};
    };

    const auto [k_off, cost_off, it_off] = averaged(false);
    const auto [k_on, cost_on, it_on] = averaged(true);
    return {
        {"groups", k_off, k_on, pct_change(k_off, k_on)},
        {"cost", cost_off, cost_on, pct_change(cost_off, cost_on)},
        {"iterations", it_off, it_on, pct_change(it_off, it_on)},
    };
}

void write_reves_csv(std::ostream& os, const std::vector<RevesRow>& rows) {
    os << "metric,without_early_stop,with_early_stop,change_pct\n";
    for (const auto& r : rows)
        os << r.metric << ',' << format_fixed(r.without_stop) << ','
           << format_fixed(r.with_stop) << ',' << format_fixed(r.change_pct) << '\n';
}

RoundSchedule emit_schedule(const GroupingSolution& s) {
    std::vector<int> order(static_cast<std::size_t>(s.k()));
    for (int j = 0; j < s.k(); ++j) order[static_cast<std::size_t>(j)] = j;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return s.groups[static_cast<std::size_t>(a)].size() > s.groups[static_cast<std::size_t>(b)].size();
    });
    RoundSchedule out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        RoundSchedule::Round round;
        round.round = static_cast<int>(i) + 1;
        round.group = order[i] + 1;
        round.members = s.groups[static_cast<std::size_t>(order[i])];
        std::sort(round.members.begin(), round.members.end());
        out.rounds.push_back(std::move(round));
    }
    return out;
}

void write_schedule(std::ostream& os, const RoundSchedule& schedule) {
    for (const auto& r : schedule.rounds) {
        os << "round " << r.round << ": S" << r.group << ':';
        for (std::size_t i = 0; i < r.members.size(); ++i)
            os << (i ? "," : " ") << r.members[i];
        os << '\n';
    }
}

HarnessConfig read_config(std::istream& is) {
    HarnessConfig cfg;
    cfg.scenario = Scenario{}; // caller must provide geometry keys
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        std::replace(t.begin(), t.end(), '=', ' ');
        const auto sp = t.find(' ');
        if (sp == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key value");
        const std::string key = trim(t.substr(0, sp));
        const std::string val = trim(t.substr(sp + 1));
        auto as_bool = [&]() {
            if (val == "1" || val == "true") return true;
            if (val == "0" || val == "false") return false;
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected boolean");
        };
        if (key == "side_length") cfg.scenario.side_length = parse_double(val);
        else if (key == "device_density") cfg.scenario.device_density = parse_double(val);
        else if (key == "app_popularity") cfg.scenario.app_popularity = parse_double(val);
        else if (key == "d_min") cfg.scenario.d_min = parse_double(val);
        else if (key == "d_max") cfg.scenario.d_max = parse_double(val);
        else if (key == "history_len") cfg.scenario.history_len = static_cast<int>(parse_int(val));
        else if (key == "sample_interval") cfg.scenario.sample_interval = parse_double(val);
        else if (key == "speed_min") cfg.scenario.speed_min = parse_double(val);
        else if (key == "speed_max") cfg.scenario.speed_max = parse_double(val);
        else if (key == "heading_resample_prob") cfg.scenario.heading_resample_prob = parse_double(val);
        else if (key == "xi_cs") cfg.xi_cs = parse_double(val);
        else if (key == "xi_ps") cfg.xi_ps = parse_double(val);
        else if (key == "alpha") cfg.params.alpha = parse_double(val);
        else if (key == "tr") cfg.params.tr = parse_double(val);
        else if (key == "max_ts_iterations") cfg.params.max_ts_iterations = parse_int(val);
        else if (key == "tabu_tenure_base") cfg.params.tabu_tenure_base = static_cast<int>(parse_int(val));
        else if (key == "reves_enabled") cfg.params.reves_enabled = as_bool();
        else if (key == "reves_ws") cfg.params.reves_ws = static_cast<int>(parse_int(val));
        else if (key == "reves_p") cfg.params.reves_p = static_cast<int>(parse_int(val));
        else if (key == "reves_on_raw_cost") cfg.params.reves_on_raw_cost = as_bool();
        else if (key == "random_placement") cfg.params.random_placement = as_bool();
        else if (key == "variance_mode") {
            if (val == "population") cfg.params.variance_mode = VarianceMode::population;
            else if (val == "sample") cfg.params.variance_mode = VarianceMode::sample;
            else throw std::runtime_error("config line " + std::to_string(lineno) +
                                          ": variance_mode must be population or sample");
        } else {
            throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key " + key);
        }
    }
    cfg.scenario.validate();
    cfg.params.validate();
    return cfg;
}

HarnessConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return read_config(in);
}

HarnessConfig resolve_scenario(const std::string& name_or_path) {
    if (name_or_path == "dense" || name_or_path == "moderate" || name_or_path == "sparse") {
        HarnessConfig cfg;
        cfg.scenario = preset_scenario(name_or_path);
        return cfg;
    }
    return load_config_file(name_or_path);
}

} // namespace geofl
