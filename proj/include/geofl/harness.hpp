#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "geofl/clustering.hpp"
#include "geofl/grouping.hpp"
#include "geofl/mobility.hpp"

namespace geofl {

/// Grid of experiment cells: every (algorithm, alpha, tr, repetition) runs on
/// every realization's clustered deployment. Algorithms that ignore tr run
/// once per (alpha, repetition) with tr recorded as 0. Known algorithm ids:
/// psg, psg-greedy (random greedy init instead of the equitable one),
/// partialcol, partialcol-elf, tabucol, dsatur, elf-greedy.
struct ExperimentPlan {
    std::string scenario_name;
    Scenario scenario;
    double xi_cs = 0.7;
    double xi_ps = 0.7;
    std::vector<std::string> algorithms{"psg"};
    std::vector<double> alphas{0.5};
    std::vector<double> trs{0.7};
    int realizations = 20;
    int repetitions = 20;
    std::uint64_t base_seed = 1;
    CostParams base_params;  // alpha/tr overridden per cell
    bool measure_time = false; // off by default so reruns are byte-identical

    void validate() const;
};

/// One cell outcome. A non-empty skip_reason marks a cell that could not run
/// (empty deployment, too few suitable nodes); skipped cells keep their seed
/// but are excluded from the record CSV and only counted by the summary.
struct ExperimentRecord {
    std::string scenario;
    std::string algorithm;
    double alpha = 0.0;
    double tr = 0.0;
    int realization = 0;
    int repetition = 0;
    int k = 0;
    double cost = 0.0;
    int ungrouped = 0;
    double evenness = 0.0;
    long long ts_iterations = 0;
    double wall_time_ms = 0.0;
    std::uint64_t seed = 0;
    std::string skip_reason;
};

/// Stated cell-seed derivation: fold base_seed with realization, repetition,
/// a hash of the algorithm name, the alpha index and the tr index, in that
/// order. Adding algorithms or appending grid values never disturbs the
/// randomness of existing cells.
std::uint64_t cell_seed(std::uint64_t base_seed, int realization, int repetition,
                        const std::string& algorithm, int alpha_index, int tr_index);

/// Per-realization deployment seed.
std::uint64_t realization_seed(std::uint64_t base_seed, int realization);

std::vector<ExperimentRecord> run_plan(const ExperimentPlan& plan);

struct SummaryRow {
    std::string scenario;
    std::string algorithm;
    double alpha = 0.0;
    double tr = 0.0;
    double mean_k = 0.0;
    double mean_cost = 0.0;
    double mean_ungrouped = 0.0;
    double mean_evenness = 0.0;
    double mean_ts_iterations = 0.0;
    int runs = 0;
    int skips = 0;
};

/// Per-cell means over completed runs, keyed by (scenario, algorithm, alpha,
/// tr); order-independent.
std::vector<SummaryRow> aggregate(const std::vector<ExperimentRecord>& records);

/// Record CSV with the fixed header
/// scenario,algorithm,alpha,tr,realization,repetition,k,cost,ungrouped,evenness,ts_iterations,wall_time_ms,seed
/// sorted by that key; floats carry six decimals. Byte-identical across reruns
/// of the same plan.
void write_records_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

/// Component ablation at alpha = 0.5: the pool-emptying baseline, the same
/// with equitable init, and the joint-cost search at tr 0.7 and 0.1. Deltas
/// are percent changes against the first row.
struct AblationRow {
    std::string variant;
    double groups = 0.0;
    double cost = 0.0;
    double groups_delta_pct = 0.0;
    double cost_delta_pct = 0.0;
};
std::vector<AblationRow> ablation_experiment(const ExperimentPlan& base);
void write_ablation_csv(std::ostream& os, const std::vector<AblationRow>& rows);

/// Group count and cost at alpha = 0.5 for psg (tr 0.7 / 0.4 / 0.1) against
/// the three complete-coloring baselines.
struct CompareRow {
    std::string algorithm;
    double groups = 0.0;
    double cost = 0.0;
};
std::vector<CompareRow> compare_experiment(const ExperimentPlan& base);
void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows);

/// Early-stopping effect on psg (tr = 0.7) averaged over alpha 0.1..0.9:
/// groups, cost and total search iterations with and without the stop rule.
/// Cell seeds do not depend on the stop rule, so the comparison is paired.
struct RevesRow {
    std::string metric;
    double without_stop = 0.0;
    double with_stop = 0.0;
    double change_pct = 0.0;
};
std::vector<RevesRow> reves_experiment(const ExperimentPlan& base);
void write_reves_csv(std::ostream& os, const std::vector<RevesRow>& rows);

/// Training rounds: groups ordered by descending size (ties: lower group
/// index), one round each, numbered from 1. Ungrouped nodes take no part.
struct RoundSchedule {
    struct Round {
        int round = 0;
        int group = 0; // 1-based group index in the source solution
        std::vector<int> members;
    };
    std::vector<Round> rounds;
};
RoundSchedule emit_schedule(const GroupingSolution& s);
void write_schedule(std::ostream& os, const RoundSchedule& schedule);

/// Key-value config: Scenario fields, cluster thresholds and CostParams
/// fields, one "key value" (or key=value) pair per line, '#' comments.
struct HarnessConfig {
    Scenario scenario;
    double xi_cs = 0.7;
    double xi_ps = 0.7;
    CostParams params;
};
HarnessConfig read_config(std::istream& is);
HarnessConfig load_config_file(const std::string& path);

/// Preset name or config file path.
HarnessConfig resolve_scenario(const std::string& name_or_path);

} // namespace geofl
