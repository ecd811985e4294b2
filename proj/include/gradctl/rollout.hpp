#pragma once

#include "gradctl/plants.hpp"
#include "gradctl/types.hpp"

namespace gradctl {

enum class IntegrationScheme {
    three_stage, // the reference scheme: x += h (k1 + 4 k3 + k2) / 6
    rk4,         // classic RK4, kept for cross-checks
};

struct IntegrationConfig {
    double step = 0.1;       // h, natural time units
    double horizon = 40.0;   // total integration span
    double loss_floor = 1e-6; // early-stop threshold on L
    IntegrationScheme scheme = IntegrationScheme::three_stage;
    double divergence_norm = 1e6;

    long step_count() const;
};

// Step-aligned record of a closed-loop movement. Row i holds the state and
// command at time i*step together with the cost accrued so far; total_cost
// is the last cumulative entry.
struct Trajectory {
    Vector times;
    Matrix states;   // nt x nx
    Matrix commands; // nt x nu
    Vector cumulative_cost;
    double total_cost = 0.0;

    long size() const { return times.size(); }
};

// Integrates x' = F(x) over the full horizon, accumulating
// C += h (L1 + 4 L3 + L2) / 6 per step. Throws DivergedError when the state
// leaves the finite/bounded region.
Trajectory integrate_closed_loop(const ClosedLoopSystem& sys, const StateVec& x0,
                                 const IntegrationConfig& cfg);

struct TargetRollout {
    Trajectory trajectory;
    bool reached = false; // loss fell under loss_floor before the horizon
};

// Same scheme, stopping at the first step whose post-step loss is below
// cfg.loss_floor.
TargetRollout rollout_to_target(const ClosedLoopSystem& sys, const StateVec& x0,
                                const IntegrationConfig& cfg);

} // namespace gradctl
