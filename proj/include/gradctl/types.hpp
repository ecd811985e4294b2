#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace gradctl {

using StateVec = Eigen::VectorXd;
using Command = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Forward rollout left the finite/bounded region (unstable closed loop).
class DivergedError : public std::runtime_error {
public:
    DivergedError(const std::string& what, long step_index)
        : std::runtime_error(what + " at step " + std::to_string(step_index)),
          step_index_(step_index) {}

    long step_index() const noexcept { return step_index_; }

private:
    long step_index_;
};

// Backward gradient integration produced a non-finite value.
class SweepDivergedError : public std::runtime_error {
public:
    SweepDivergedError(const std::string& what, long step_index)
        : std::runtime_error(what + " at backward step " + std::to_string(step_index)),
          step_index_(step_index) {}

    long step_index() const noexcept { return step_index_; }

private:
    long step_index_;
};

} // namespace gradctl
