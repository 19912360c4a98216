#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "evplace/branch_and_cut.hpp"
#include "evplace/errors.hpp"
#include "evplace/ingest.hpp"
#include "evplace/instance.hpp"
#include "evplace/milp.hpp"
#include "evplace/report.hpp"
#include "text_util.hpp"

namespace evplace {

namespace {

using detail::fmt_double;

struct InstanceArgs {
    std::string sites_path, rps_path, params_path;
};

void add_instance_options(CLI::App* cmd, InstanceArgs& args) {
    cmd->add_option("--sites", args.sites_path, "candidate-site CSV or GeoJSON file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--rps", args.rps_path, "residential-point CSV or GeoJSON file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--params", args.params_path, "scenario parameter file")
        ->required()
        ->check(CLI::ExistingFile);
}

Instance load_instance(const InstanceArgs& args) {
    auto sites = load_sites(args.sites_path);
    auto rps = load_rps(args.rps_path);
    auto params = load_params(args.params_path);
    for (const auto& warning : power_band_warnings(params.level2)) {
        std::cerr << "warning: " << warning << "\n";
    }
    for (const auto& warning : power_band_warnings(params.level3)) {
        std::cerr << "warning: " << warning << "\n";
    }
    return make_instance(std::move(sites), std::move(rps), std::move(params));
}

void print_breakdown(const CostBreakdown& breakdown) {
    const auto shares = breakdown_shares(breakdown);
    const auto comps = breakdown.components();
    for (std::size_t c = 0; c < CostBreakdown::kComponents; ++c) {
        char pct[32] = "";
        if (!shares.zero_total) {
            std::snprintf(pct, sizeof(pct), " (%.2f%%)", shares.percent[c]);
        }
        std::printf("  %-13s %s%s\n", CostBreakdown::component_name(c),
                    fmt_double(comps[c]).c_str(), pct);
    }
    std::printf("  %-13s %s\n", "total", fmt_double(breakdown.total).c_str());
}

int run_solve(const InstanceArgs& iargs, const SolverOptions& opts, bool quiet,
              const std::string& log_path, const std::string& lp_path,
              const std::string& json_path, const std::string& csv_path,
              const std::string& geojson_path) {
    const Instance inst = load_instance(iargs);
    const MilpModel model = build_model(inst);
    if (!lp_path.empty()) export_lp(model, lp_path);

    std::ofstream log;
    if (!log_path.empty()) {
        log.open(log_path);
        if (!log) throw std::runtime_error("cannot open log file: " + log_path);
    }
    SolveHooks hooks;
    hooks.on_progress = [&](const ProgressEvent& ev) {
        const std::string line = format_progress(ev);
        if (!quiet) std::cout << line << "\n";
        if (log.is_open()) log << line << "\n";
    };
    const bool want_progress = !quiet || log.is_open();
    const SolveOutcome outcome = solve(inst, model, opts, want_progress ? &hooks : nullptr);
    const SolverStats& stats = outcome.stats;

    std::printf("status: %s\n", to_string(stats.status));
    std::printf("nodes: %lld  cuts: %lld\n", stats.nodes_explored, stats.cuts_added);
    std::printf("bound: %s\n", fmt_double(stats.best_bound).c_str());
    if (outcome.solution) {
        const Solution& sol = *outcome.solution;
        std::printf("objective: %s\n", fmt_double(sol.objective).c_str());
        std::printf("gap: %s\n", fmt_double(stats.final_gap).c_str());
        const RunReport report = make_report(inst, sol, stats);
        std::printf("stations: %lld at %lld sites\n", report.total_stations,
                    report.opened_sites);
        std::printf("daily cost breakdown:\n");
        print_breakdown(sol.breakdown);
        if (!json_path.empty()) write_solution_json(sol, inst, json_path);
        if (!csv_path.empty()) export_csv_summary(report, inst, csv_path);
        if (!geojson_path.empty()) export_geojson(sol, inst, geojson_path);
        return 0;
    }
    if (stats.status == SolveStatus::infeasible) {
        std::printf("no feasible station plan exists under these constraints\n");
        return 2;
    }
    std::printf("stopped at a limit before finding any feasible plan\n");
    return 3;
}

int run_validate(const InstanceArgs& iargs, const std::string& solution_path) {
    const Instance inst = load_instance(iargs);
    const MilpModel model = build_model(inst);
    const Solution sol = load_solution_json(inst, solution_path);
    const FeasibilityReport report = check_feasibility(model, sol.decision);
    if (!report.feasible) {
        std::printf("infeasible: %zu violation(s)\n", report.violations.size());
        for (const auto& v : report.violations) {
            std::printf("  %s: violated by %s\n", v.row.c_str(),
                        fmt_double(v.magnitude).c_str());
        }
        return 2;
    }
    const CostBreakdown actual = evaluate(sol.decision, inst);
    std::printf("feasible\n");
    std::printf("objective (recomputed): %s\n", fmt_double(actual.total).c_str());
    const double stored = sol.objective;
    if (stored != 0.0 &&
        std::abs(stored - actual.total) > 1e-6 * std::max(1.0, std::abs(actual.total))) {
        std::printf("note: stored objective %s differs from the recomputed value\n",
                    fmt_double(stored).c_str());
    }
    return 0;
}

int run_synth(int n_sites, int n_rps, std::uint64_t seed, const std::string& out_dir) {
    const SyntheticInstance synth = generate_synthetic(n_sites, n_rps, seed);
    std::filesystem::create_directories(out_dir);
    const std::string sites_path = out_dir + "/sites.csv";
    const std::string rps_path = out_dir + "/rps.csv";
    const std::string params_path = out_dir + "/params.txt";
    write_sites(synth.sites, sites_path);
    write_rps(synth.rps, rps_path);
    write_params(synth.params, params_path);
    std::printf("%s\n%s\n%s\n", sites_path.c_str(), rps_path.c_str(), params_path.c_str());
    return 0;
}

int run_oracle(const InstanceArgs& iargs, long long cap, const std::string& json_path) {
    const Instance inst = load_instance(iargs);
    const MilpModel model = build_model(inst);
    const BruteForceResult result = brute_force(model, cap);
    if (!result.feasible) {
        std::printf("no feasible station plan exists under these constraints\n");
        return 2;
    }
    std::printf("objective: %s\n", fmt_double(result.objective).c_str());
    long long stations = 0, opened = 0;
    for (std::size_t i = 0; i < inst.sites.size(); ++i) {
        stations += result.decision.x2[i] + result.decision.x3[i];
        opened += result.decision.open[i] ? 1 : 0;
    }
    std::printf("stations: %lld at %lld sites\n", stations, opened);
    if (!json_path.empty()) {
        Solution sol;
        sol.decision = result.decision;
        sol.objective = result.objective;
        sol.breakdown = evaluate(result.decision, inst);
        write_solution_json(sol, inst, json_path);
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{
        "EV charging-station placement: chooses per-site level-2/level-3 station counts and "
        "a demand assignment minimizing total daily cost."};
    app.require_subcommand(1);

    InstanceArgs solve_args;
    SolverOptions solver_opts;
    double time_limit = 0.0;
    bool quiet = false;
    std::string log_path, lp_path, json_path, csv_path, geojson_path;
    CLI::App* cmd_solve = app.add_subcommand("solve", "solve an instance to optimality");
    add_instance_options(cmd_solve, solve_args);
    cmd_solve->add_option("--gap", solver_opts.gap, "relative optimality gap target");
    cmd_solve->add_option("--time-limit", time_limit, "wall-clock limit in seconds (0 = none)");
    cmd_solve->add_option("--node-limit", solver_opts.node_limit,
                          "search-node limit (0 = none)");
    cmd_solve->add_option("--max-cuts-per-node", solver_opts.max_cuts_per_node,
                          "cutting-plane rounds per node");
    cmd_solve->add_option("--progress-every", solver_opts.progress_every,
                          "progress line cadence in nodes");
    cmd_solve->add_flag("--quiet", quiet, "suppress progress lines");
    cmd_solve->add_option("--log", log_path, "write progress lines to this file");
    cmd_solve->add_option("--export-lp", lp_path, "write the model in LP format");
    cmd_solve->add_option("--out-json", json_path, "write the solution as JSON");
    cmd_solve->add_option("--out-csv", csv_path, "write the per-site cost summary CSV");
    cmd_solve->add_option("--out-geojson", geojson_path, "write the solution as GeoJSON");

    InstanceArgs validate_args;
    std::string solution_path;
    CLI::App* cmd_validate =
        app.add_subcommand("validate", "check a solution file against an instance");
    add_instance_options(cmd_validate, validate_args);
    cmd_validate->add_option("--solution", solution_path, "solution JSON to check")
        ->required()
        ->check(CLI::ExistingFile);

    int n_sites = 0, n_rps = 0;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    CLI::App* cmd_synth =
        app.add_subcommand("synth", "generate a reproducible synthetic instance");
    cmd_synth->add_option("--sites", n_sites, "candidate sites to generate")->required();
    cmd_synth->add_option("--rps", n_rps, "residential points to generate")->required();
    cmd_synth->add_option("--seed", seed, "generator seed");
    cmd_synth->add_option("--out", out_dir, "output directory");

    InstanceArgs oracle_args;
    long long cap = 4;
    std::string oracle_json;
    CLI::App* cmd_oracle =
        app.add_subcommand("oracle", "exhaustive reference solve of a tiny instance");
    add_instance_options(cmd_oracle, oracle_args);
    cmd_oracle->add_option("--cap", cap, "largest allowed per-variable station bound");
    cmd_oracle->add_option("--out-json", oracle_json, "write the solution as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_solve->parsed()) {
            if (time_limit > 0.0) solver_opts.time_limit_s = time_limit;
            return run_solve(solve_args, solver_opts, quiet, log_path, lp_path, json_path,
                             csv_path, geojson_path);
        }
        if (cmd_validate->parsed()) return run_validate(validate_args, solution_path);
        if (cmd_synth->parsed()) return run_synth(n_sites, n_rps, seed, out_dir);
        if (cmd_oracle->parsed()) return run_oracle(oracle_args, cap, oracle_json);
    } catch (const UnreachableDemandError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace evplace
