#pragma once

#include "gradctl/plants.hpp"
#include "gradctl/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace gradctl {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail; // worst observed error or mismatch description
};

// The full property suite: finite-difference Jacobian checks, the 1-D
// analytic oracle, projection identities, sweep-vs-rollout agreement,
// round-1 policy improvement and seeded determinism.
std::vector<CheckResult> run_property_suite();

// Central finite-difference Jacobian of a vector map, step 1e-5.
Matrix finite_difference_jacobian(const std::function<Vector(const StateVec&)>& f,
                                  const StateVec& x, double step = 1e-5);

// max |a - b| / max(1, |b|_max): the relative metric used by the checks.
double relative_error(const Matrix& a, const Matrix& b);

} // namespace gradctl
