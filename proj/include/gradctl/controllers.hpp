#pragma once

#include "gradctl/features.hpp"
#include "gradctl/plants.hpp"
#include "gradctl/types.hpp"

namespace gradctl {

// u(x) = sat(gain x), clipped to magnitude clamp * (1 - 1000 eps).
// Jacobian is gain while |gain x| < clamp and zero beyond the kink.
Controller saturated_linear(const RowVec& gain, double clamp);

// u(x) = -tanh(w dtheta/dx G / (2R)): the closed-form minimizer for the
// saturated command penalty with weight R.
Controller feature_tanh(const RowVec& w, const FeatureBasis& basis, const PlantModel& plant, double r);

// u(x) = -(w dtheta/dx G)': the unconstrained quadratic-penalty minimizer.
Controller feature_linear(const RowVec& w, const FeatureBasis& basis, const PlantModel& plant);

// Improved law of policy iteration: the weight row routed through the loss's
// command minimizer, so new losses only supply argmin_command.
Controller improved_controller(const RowVec& w, const FeatureBasis& basis, const PlantModel& plant,
                               const LossModel& loss);

} // namespace gradctl
