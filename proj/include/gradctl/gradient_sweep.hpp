#pragma once

#include "gradctl/plants.hpp"
#include "gradctl/rollout.hpp"
#include "gradctl/types.hpp"

#include <vector>

namespace gradctl {

// One teaching example: the cost-to-go gradient of the current feedback law
// at a visited state, plus its precomputed contraction with G.
struct GradientSample {
    StateVec state;
    RowVec grad;   // grad J, 1 x nx
    RowVec grad_g; // grad J * G, 1 x nu
};

struct SweepResult {
    std::vector<GradientSample> samples; // ordered along the forward trajectory
    bool reached_floor = false;
    long steps = 0;
};

// Minimum-norm correction of grad onto the constraint grad xdot = -loss_value.
// Degenerate velocities (|xdot| < 1e-12) leave grad unchanged.
RowVec ghjb_project(const RowVec& grad, const StateVec& xdot, double loss_value);

// Forward rollout to the loss floor storing every visited state as a
// breadcrumb, then backward integration of
//   d(grad J)/dt = -DL/Dx - grad J * DF/Dx
// along the stored path, snapping to each breadcrumb and projecting onto the
// instantaneous constraint before emitting a sample. One sample per breadcrumb.
SweepResult sweep(const ClosedLoopSystem& sys, const StateVec& x0, const IntegrationConfig& cfg);

} // namespace gradctl
