// Command-line front end: IID distance estimation, grouping simulations, the
// ablation / comparison / early-stopping experiments, and round scheduling.

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geofl/harness.hpp"
#include "geofl/stats.hpp"

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return in;
}

struct PlanOptions {
    std::string scenario;
    int realizations = 20;
    int repetitions = 20;
    std::uint64_t seed = 1;
    std::string out;
};

void add_plan_options(CLI::App* cmd, PlanOptions& opt) {
    cmd->add_option("--scenario", opt.scenario,
                    "Scenario preset (dense|moderate|sparse) or config file path")
        ->required();
    cmd->add_option("--realizations", opt.realizations, "Deployment realizations");
    cmd->add_option("--repetitions", opt.repetitions, "Repetitions per realization");
    cmd->add_option("--seed", opt.seed, "Base seed");
    cmd->add_option("--out", opt.out, "Output CSV path")->required();
}

geofl::ExperimentPlan plan_from_options(const PlanOptions& opt) {
    const auto cfg = geofl::resolve_scenario(opt.scenario);
    geofl::ExperimentPlan plan;
    plan.scenario_name = opt.scenario;
    plan.scenario = cfg.scenario;
    plan.xi_cs = cfg.xi_cs;
    plan.xi_ps = cfg.xi_ps;
    plan.base_params = cfg.params;
    plan.realizations = opt.realizations;
    plan.repetitions = opt.repetitions;
    plan.base_seed = opt.seed;
    return plan;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Geographic node clustering and grouping toolkit"};
    app.require_subcommand(1);

    // estimate-iid
    std::string iid_input, iid_ref, iid_out, iid_units = "nats";
    double iid_kl_threshold = 0.0, iid_corr_threshold = 0.0, iid_confidence = 0.95;
    int iid_bins = 5;
    auto* est = app.add_subcommand("estimate-iid",
                                   "Estimate d_max / d_min from location measurements");
    est->add_option("--input", iid_input, "Measurement file (label,x,y header)")->required();
    est->add_option("--ref", iid_ref, "Reference location label")->required();
    est->add_option("--kl-threshold", iid_kl_threshold, "KL divergence threshold")->required();
    est->add_option("--corr-threshold", iid_corr_threshold, "Correlation threshold")->required();
    est->add_option("--confidence", iid_confidence, "Required fraction of qualifying locations");
    est->add_option("--bins", iid_bins, "Histogram bin count");
    est->add_option("--kl-units", iid_units, "KL units: nats or bits")
        ->check(CLI::IsMember({"nats", "bits"}));
    est->add_option("--out", iid_out, "Report path")->required();

    // simulate
    PlanOptions sim_opt;
    std::string sim_algo;
    std::vector<double> sim_alphas{0.5}, sim_trs{0.7};
    bool sim_reves = false, sim_timing = false;
    int sim_ws = 0, sim_p = 0;
    std::string sim_summary;
    auto* sim = app.add_subcommand("simulate", "Run one grouping algorithm over a scenario grid");
    add_plan_options(sim, sim_opt);
    sim->add_option("--algo", sim_algo, "psg|partialcol|tabucol|dsatur|elf-greedy")->required();
    sim->add_option("--alpha", sim_alphas, "Alpha grid")->delimiter(',');
    sim->add_option("--tr", sim_trs, "tr grid (psg only)")->delimiter(',');
    sim->add_flag("--reves", sim_reves, "Enable tabu-search early stopping");
    sim->add_option("--reves-ws", sim_ws, "Early-stopping window size");
    sim->add_option("--reves-p", sim_p, "Early-stopping patience");
    sim->add_flag("--timing", sim_timing,
                  "Record wall time per cell (off by default; breaks byte-identical reruns)");
    sim->add_option("--summary", sim_summary, "Also write per-cell means to this CSV");

    // ablate / compare / reves
    PlanOptions abl_opt, cmp_opt, rev_opt;
    auto* abl = app.add_subcommand("ablate", "Component ablation at alpha = 0.5");
    add_plan_options(abl, abl_opt);
    auto* cmp = app.add_subcommand("compare", "psg against the complete-coloring baselines");
    add_plan_options(cmp, cmp_opt);
    auto* rev = app.add_subcommand("reves", "Early-stopping effect averaged over alpha");
    add_plan_options(rev, rev_opt);

    // schedule
    std::string sch_solution, sch_out;
    auto* sch = app.add_subcommand("schedule", "Emit training rounds for a grouping solution");
    sch->add_option("--solution", sch_solution, "Solution file")->required();
    sch->add_option("--out", sch_out, "Schedule path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (est->parsed()) {
            auto in = open_in(iid_input);
            const auto m = geofl::read_measurements(in);
            auto out = open_out(iid_out);
            const double scale = iid_units == "bits" ? std::log(2.0) : 1.0;
            geofl::write_iid_report(out, m, iid_ref, iid_kl_threshold, iid_corr_threshold,
                                    iid_confidence, iid_bins, scale);
        } else if (sim->parsed()) {
            auto plan = plan_from_options(sim_opt);
            plan.algorithms = {sim_algo};
            plan.alphas = sim_alphas;
            plan.trs = sim_trs;
            plan.measure_time = sim_timing;
            if (sim_reves) plan.base_params.reves_enabled = true;
            if (sim_ws > 0) plan.base_params.reves_ws = sim_ws;
            if (sim_p > 0) plan.base_params.reves_p = sim_p;
            const auto records = geofl::run_plan(plan);
            auto out = open_out(sim_opt.out);
            geofl::write_records_csv(out, records);
            if (!sim_summary.empty()) {
                auto sout = open_out(sim_summary);
                geofl::write_summary_csv(sout, geofl::aggregate(records));
            }
        } else if (abl->parsed()) {
            auto out = open_out(abl_opt.out);
            geofl::write_ablation_csv(out, geofl::ablation_experiment(plan_from_options(abl_opt)));
        } else if (cmp->parsed()) {
            auto out = open_out(cmp_opt.out);
            geofl::write_compare_csv(out, geofl::compare_experiment(plan_from_options(cmp_opt)));
        } else if (rev->parsed()) {
            auto out = open_out(rev_opt.out);
            geofl::write_reves_csv(out, geofl::reves_experiment(plan_from_options(rev_opt)));
        } else if (sch->parsed()) {
            auto in = open_in(sch_solution);
            const auto solution = geofl::solution_from_text(in);
            auto out = open_out(sch_out);
            geofl::write_schedule(out, geofl::emit_schedule(solution));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
