#pragma once

#include "gradctl/learners.hpp"
#include "gradctl/rollout.hpp"
#include "gradctl/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

namespace gradctl {

// Per-round test costs on the oscillator benchmark (cost-vs-round curves).
struct Fig2Config {
    Method method = Method::direct_grad_g;
    int max_order = 8;
    int rounds = 5;
    std::uint64_t seed = 1;
};

std::vector<RoundReport> reproduce_fig2(const Fig2Config& cfg, const std::filesystem::path& out_dir);

// Test-movement trajectories for the initial, best and final controllers of a
// fig2-style run.
struct Fig3Result {
    std::vector<RoundReport> reports;
    Trajectory initial;
    Trajectory best;
    Trajectory final;
    int best_round = 1;
};

Fig3Result reproduce_fig3(const Fig2Config& cfg, const std::filesystem::path& out_dir);

// Best-cost-per-run sweep over random log-cosh feature counts on the
// integrator benchmark.
struct SweepRecord {
    int feature_count = 0;
    int run_index = 0;
    Method method = Method::direct_grad_g;
    double best_cost = 0.0;
    int best_round = 1;
    std::uint64_t seed = 0;
};

struct Fig4Config {
    std::vector<int> feature_counts{5, 30, 100};
    int runs_per_count = 5;
    int rounds = 19;
    std::uint64_t base_seed = 1;
    double feature_scale = 5.0;
    int sweeps_per_round = 100;
    double ridge = 1e-3; // direct fits only; log-cosh normal equations are badly conditioned
};

struct Fig4Result {
    std::vector<SweepRecord> records;
    // median best cost per (feature_count, method)
    std::map<std::pair<int, Method>, double> medians;
    double reference_cost = 0.0; // minimum best cost over the whole sweep
};

Fig4Result reproduce_fig4(const Fig4Config& cfg, const std::filesystem::path& out_dir);

// Gradient field of a controller on a square grid: one sweep per grid point,
// emitting (x1, x2, g1, g2, sign(g G)); failed points carry nan markers.
void export_gradient_field(const Controller& controller, const Problem& problem, int grid_points,
                           double box, const std::filesystem::path& out_path);

} // namespace gradctl
