#pragma once

#include "gradctl/controllers.hpp"
#include "gradctl/features.hpp"
#include "gradctl/plants.hpp"
#include "gradctl/rng.hpp"
#include "gradctl/rollout.hpp"
#include "gradctl/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gradctl {

enum class Method { ghjb, direct_grad, direct_grad_g };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

enum class SampleWarp { sine, uniform };

// Streaming sufficient statistics of the squared-error objectives:
// yy = sum y y', yr = sum r y'.
struct NormalEquations {
    Matrix yy;
    RowVec yr;
    long count = 0;

    explicit NormalEquations(int nf) : yy(Matrix::Zero(nf, nf)), yr(RowVec::Zero(nf)), count(0) {}

    void merge(const NormalEquations& other);
};

// y holds one column per target component (nf x k), r the matching targets (1 x k).
void accumulate(NormalEquations& ne, const Eigen::Ref<const Matrix>& y,
                const Eigen::Ref<const RowVec>& r);

// w minimizing the accumulated objective. ridge > 0 solves
// (yy + ridge I) w' = yr'; otherwise the eigendecomposition pseudoinverse with
// tolerance nf * eps * lambda_max, giving the minimum-norm minimizer.
RowVec solve_weights(const NormalEquations& ne, double ridge);

struct TrainingConfig {
    Method method = Method::direct_grad_g;
    int rounds = 5;
    int sweeps_per_round = 100;
    double training_box_halfwidth = 1.0; // b
    // Sweep starting states use the face-concentrating sine warp; GHJB draws
    // its states plain-uniform (the warp visibly degrades the GHJB fixed
    // point on the oscillator benchmark).
    SampleWarp sample_warp = SampleWarp::sine;
    SampleWarp ghjb_sample_warp = SampleWarp::uniform;
    std::uint64_t seed = 1;
    double ridge = 0.0;
    // 0 = matched budget: sweeps_per_round * steps per horizon.
    long ghjb_samples = 0;
};

// A benchmark problem: plant + loss + integration scheme + test movements,
// plus the stabilizing law policy iteration starts from.
struct Problem {
    std::string name;
    PlantModel plant;
    LossModel loss;
    IntegrationConfig integration;
    std::vector<StateVec> test_states;
    Controller initial;
};

Problem make_oscillator_problem();
Problem make_integrator_problem(double q = 100.0, double r = 1.0);

// Coordinates uniform on [-1, 1], optionally warped by b sin(pi v / 2) to
// concentrate samples toward the box faces.
StateVec sample_training_state(int nx, double halfwidth, SampleWarp warp, SeededRng& rng);

struct FitResult {
    RowVec weights;
    long samples_used = 0;
};

// GHJB objective (indirect): y = dtheta/dx xdot, r = -L, states drawn
// directly from the training box.
FitResult fit_ghjb(const ClosedLoopSystem& sys, const FeatureBasis& basis, const TrainingConfig& cfg,
                   const IntegrationConfig& integration, SeededRng& rng);

// Direct objectives: gradient sweeps supply teaching samples; variant
// direct_grad fits grad J against dtheta/dx, variant direct_grad_g fits
// grad J G against dtheta/dx G. Throws SweepDivergedError if any sweep fails.
FitResult fit_direct(const ClosedLoopSystem& sys, const FeatureBasis& basis, const TrainingConfig& cfg,
                     const IntegrationConfig& integration, SeededRng& rng);

struct RoundReport {
    int round = 1; // controller index: 1 = initial law, n+1 = product of round n
    RowVec weights; // empty for the initial law
    double test_cost = 0.0;
    bool diverged = false;
    long samples_used = 0;
};

// Mean full-horizon rollout cost over the problem's test states; infinity
// (and diverged flag) when the rollout escapes.
std::pair<double, bool> evaluate_controller(const Problem& problem, const Controller& controller);

// fit -> improve -> evaluate for cfg.rounds rounds. Reports carry one row per
// controller, the initial law included; failed rounds advance with the last
// good weights and are marked diverged.
std::vector<RoundReport> run_policy_iteration(const Problem& problem, const FeatureBasis& basis,
                                              const Controller& initial, const TrainingConfig& cfg);

} // namespace gradctl
