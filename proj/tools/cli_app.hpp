#pragma once

#include "narratables/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

namespace narratables::cli {

/// Full command-line front end; `args` excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err, bool out_is_tty = false) {
    CLI::App app{"narratables: frame-dependent spin histories and cluster-decomposition checks"};
    app.name("narratables");
    app.require_subcommand(1);

    CommonOptions common;
    app.add_option("--tolerance", common.tolerance, "history comparison tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    DemoOptions demo_opts;
    auto* demo = app.add_subcommand("demo-paper", "built-in four-particle non-narratability demo");
    demo->add_option("--csv", demo_opts.csv_path, "write (foliation_id, tau, overlap_magnitude) rows");
    demo->add_option("--write-scenario", demo_opts.scenario_out, "write the built-in scenario file");

    SimulateOptions sim_opts;
    auto* sim = app.add_subcommand("simulate", "state history of one rule along one foliation");
    sim->add_option("scenario", sim_opts.scenario_path, "scenario file")->required();
    sim->add_option("--rule", sim_opts.rule, "interaction rule name")->required();
    sim->add_option("--foliation", sim_opts.foliation, "foliation index in the scenario file")->capture_default_str();
    sim->add_option("--csv", sim_opts.csv_path, "write overlap with the initial state on a tau grid");
    sim->add_option("--tau-grid", sim_opts.tau_grid, "number of tau samples for --csv")->capture_default_str();

    CompareOptions cmp_opts;
    auto* cmp = app.add_subcommand("compare-frames", "narratability report for two rules over the file's foliations");
    cmp->add_option("scenario", cmp_opts.scenario_path, "scenario file")->required();
    std::vector<std::string> rule_names;
    cmp->add_option("--rules", rule_names, "two rule names (default: free flip)")->expected(2);
    cmp->add_option("--csv", cmp_opts.csv_path, "write (foliation_id, tau, overlap_magnitude) rows");

    std::string kernel_path;
    auto* cluster = app.add_subcommand("cluster-check", "delta-function structure of a momentum kernel");
    cluster->add_option("kernel", kernel_path, "kernel file")->required();

    AlgebraOptions alg_opts;
    auto* alg = app.add_subcommand("algebra", "finite-dimensional generator checks");
    alg->require_subcommand(1);
    auto add_files = [&](CLI::App* sub) {
        sub->add_option("files", alg_opts.files, "matrix files (PATH or ROLE=PATH)")->required();
    };
    auto* residuals = alg->add_subcommand("residuals", "Poincare bracket residuals");
    auto* solve_w = alg->add_subcommand("solve-w", "boost correction W from [K0,V] = -[W,H]");
    auto* same = alg->add_subcommand("same-history", "exp(i(H0+Va)t) psi0 vs exp(i(H0+Vb)t) psi0");
    auto* boost = alg->add_subcommand("boost-check", "is W psi proportional to psi?");
    for (auto* sub : {residuals, solve_w, same, boost}) add_files(sub);
    solve_w->add_option("--axis", alg_opts.axis, "boost axis 1..3")->capture_default_str();
    same->add_option("--times", alg_opts.times, "comma-separated time samples")->delimiter(',');

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : exit_code::kUsage;
    }

    common.style = resolve_style(color_mode_from_env(std::getenv("NARRATABLES_COLOR")), out_is_tty);

    if (*demo) return cmd_demo_paper(common, demo_opts, out, err);
    if (*sim) return cmd_simulate(common, sim_opts, out, err);
    if (*cmp) {
        if (rule_names.size() == 2) {
            cmp_opts.rule1 = rule_names[0];
            cmp_opts.rule2 = rule_names[1];
        }
        return cmd_compare_frames(common, cmp_opts, out, err);
    }
    if (*cluster) return cmd_cluster_check(kernel_path, out, err);
    for (auto* sub : {residuals, solve_w, same, boost})
        if (*sub) alg_opts.subcommand = sub->get_name();
    return cmd_algebra(alg_opts, out, err);
}

} // namespace narratables::cli
