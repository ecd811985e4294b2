#pragma once

#include "gradctl/learners.hpp"
#include "gradctl/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace gradctl {

// Flat key=value run description. Presets ak2005_ex52 (oscillator, order-8
// monomials) and ak2004_ex53 (integrator, 50 log-cosh features) carry the
// benchmark defaults; individual keys override.
struct RunConfig {
    std::string problem = "oscillator_5_1"; // or integrator_5_2
    std::string method = "direct_grad_g";   // ghjb | direct_grad | direct_grad_g
    std::string basis = "monomial";         // monomial | logcosh
    int monomial_order = 8;
    int feature_count = 50;
    double feature_scale = 5.0;
    double loss_q = 100.0;
    double loss_r = 1.0;
    double step = 0.1;
    double horizon = 40.0;
    double loss_floor = 1e-6;
    std::string scheme = "three_stage"; // or rk4
    int rounds = 5;
    int sweeps_per_round = 100;
    long ghjb_samples = 0; // 0 = matched budget
    double training_box = 1.0;
    std::string sample_warp = "sine";      // sweep starting states
    std::string ghjb_sample_warp = "uniform"; // GHJB training states
    double ridge = 0.0;
    std::uint64_t seed = 1;
    std::string out = "gradctl_out";
};

void apply_preset(RunConfig& cfg, const std::string& name);
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

// Every key in fixed order; parsing the result reproduces the run.
std::string serialize_config(const RunConfig& cfg);

Problem problem_from_config(const RunConfig& cfg);
TrainingConfig training_from_config(const RunConfig& cfg);

// Executes the configured policy-iteration run and writes rounds.csv,
// per-round weight files, the feature matrix (log-cosh bases), the
// initial/best/final test trajectories, config_echo.cfg and manifest.txt
// under cfg.out. Returns the process exit code.
int run_from_config(const RunConfig& cfg);

} // namespace gradctl
