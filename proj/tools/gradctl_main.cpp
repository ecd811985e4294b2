// gradctl: near-optimal feedback controller synthesis by policy iteration,
// with GHJB and direct value-gradient learners.
//
// Subcommands:
//   run    -- policy iteration from a key=value config file
//   fig2   -- cost-vs-round curves on the oscillator benchmark
//   fig3   -- test-movement trajectories (initial / best / final controllers)
//   fig4   -- best-cost sweep over random log-cosh feature counts
//   field  -- gradient field of the initial controller on a grid
//   verify -- property suite (exit 0 iff all checks pass)

#include "gradctl/config.hpp"
#include "gradctl/experiments.hpp"
#include "gradctl/verify.hpp"
#include "gradctl/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override,
            std::uint64_t seed_override, bool has_seed) {
    gradctl::RunConfig cfg = gradctl::parse_config_file(config_path);
    if (!out_override.empty())
        cfg.out = out_override;
    if (has_seed)
        cfg.seed = seed_override;
    return gradctl::run_from_config(cfg);
}

int cmd_verify() {
    const auto results = gradctl::run_property_suite();
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] %-60s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        all = all && r.passed;
    }
    std::printf("%s\n", all ? "verify: all checks passed" : "verify: FAILURES above");
    return all ? 0 : 1;
}

std::vector<int> parse_counts(const std::string& csv_list) {
    std::vector<int> counts;
    std::string tok;
    std::stringstream ss(csv_list);
    while (std::getline(ss, tok, ','))
        counts.push_back(std::stoi(tok));
    return counts;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"near-optimal controller synthesis via value-gradient policy iteration"};
    app.set_version_flag("--version", GRADCTL_VERSION);
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "policy iteration from a config file");
    std::string config_path, out_dir;
    std::uint64_t seed = 1;
    run->add_option("--config", config_path, "key=value config file")->required();
    run->add_option("--out", out_dir, "output directory override");
    auto* run_seed = run->add_option("--seed", seed, "seed override");

    // fig2 / fig3
    std::string method = "direct";
    int order = 8;
    int rounds = 5;
    auto* fig2 = app.add_subcommand("fig2", "cost-vs-round curves (oscillator)");
    auto* fig3 = app.add_subcommand("fig3", "test-movement trajectories (oscillator)");
    for (auto* cmd : {fig2, fig3}) {
        cmd->add_option("--method", method, "ghjb | direct");
        cmd->add_option("--order", order, "monomial order: 2, 4, 6 or 8");
        cmd->add_option("--rounds", rounds, "improvement rounds");
        cmd->add_option("--seed", seed, "run seed");
        cmd->add_option("--out", out_dir, "output directory");
    }

    // fig4
    auto* fig4 = app.add_subcommand("fig4", "random-feature sweep (integrator)");
    std::string counts = "5,30,100";
    int runs_per_count = 5;
    int fig4_rounds = 19;
    bool quick = false, full = false;
    fig4->add_option("--features", counts, "comma-separated feature counts");
    fig4->add_option("--runs", runs_per_count, "runs per feature count");
    fig4->add_option("--rounds", fig4_rounds, "improvement rounds per run");
    fig4->add_option("--seed", seed, "base seed");
    fig4->add_option("--out", out_dir, "output directory");
    fig4->add_flag("--quick", quick, "desk-scale sweep (the default)");
    fig4->add_flag("--full", full, "full sweep: counts up to 300, 10 runs each");

    // field
    auto* field = app.add_subcommand("field", "gradient field of the initial controller");
    std::string problem_name = "oscillator_5_1";
    int grid = 11;
    double box = 1.0;
    field->add_option("--problem", problem_name, "oscillator_5_1 | integrator_5_2");
    field->add_option("--grid", grid, "grid points per axis");
    field->add_option("--box", box, "half-width of the grid box");
    field->add_option("--out", out_dir, "output directory");

    auto* verify = app.add_subcommand("verify", "run the property suite");
    (void)verify;

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, out_dir, seed, run_seed->count() > 0);

        if (out_dir.empty())
            out_dir = "gradctl_out";

        if (fig2->parsed() || fig3->parsed()) {
            gradctl::Fig2Config cfg;
            cfg.method = gradctl::method_from_name(method);
            cfg.max_order = order;
            cfg.rounds = rounds;
            cfg.seed = seed;
            if (fig2->parsed())
                gradctl::reproduce_fig2(cfg, out_dir);
            else
                gradctl::reproduce_fig3(cfg, out_dir);
            return 0;
        }
        if (fig4->parsed()) {
            gradctl::Fig4Config cfg;
            cfg.feature_counts = parse_counts(counts);
            cfg.runs_per_count = runs_per_count;
            cfg.rounds = fig4_rounds;
            cfg.base_seed = seed;
            if (full) {
                cfg.feature_counts = {5, 10, 20, 30, 50, 100, 200, 300};
                cfg.runs_per_count = 10;
            }
            gradctl::reproduce_fig4(cfg, out_dir);
            return 0;
        }
        if (field->parsed()) {
            gradctl::Problem problem = problem_name == "integrator_5_2"
                                           ? gradctl::make_integrator_problem()
                                           : gradctl::make_oscillator_problem();
            gradctl::export_gradient_field(problem.initial, problem, grid, box,
                                           std::filesystem::path(out_dir) / "field.csv");
            return 0;
        }
        if (verify->parsed())
            return cmd_verify();
    } catch (const std::exception& e) {
        std::cerr << "gradctl: error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
