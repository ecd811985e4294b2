#include "gradctl/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace gradctl {

Controller saturated_linear(const RowVec& gain, double clamp) {
    if (!(clamp > 0.0) || clamp > 1.0)
        throw std::invalid_argument("saturation clamp must lie in (0, 1]");
    const double limit = clamp * saturation_limit();
    const int nx = static_cast<int>(gain.cols());

    Controller c;
    c.kind = ControllerKind::saturated_linear;
    c.eval = [gain, limit](const StateVec& x) {
        Command u(1);
        u(0) = std::clamp(gain.dot(x), -limit, limit);
        return u;
    };
    c.jacobian = [gain, clamp, nx](const StateVec& x) {
        if (std::abs(gain.dot(x)) < clamp)
            return Matrix(gain);
        return Matrix(Matrix::Zero(1, nx));
    };
    return c;
}

namespace {

// Shared shape: u = rule(p) with p(x) = w dtheta/dx G, and
// Du/Dx = (du*/dp) dp/dx via the basis's Hessian contraction.
Controller feature_rule_controller(ControllerKind kind, const RowVec& w, const FeatureBasis& basis,
                                   const PlantModel& plant,
                                   std::function<Command(const RowVec&)> argmin,
                                   std::function<Matrix(const RowVec&, const Command&)> argmin_jacobian) {
    if (static_cast<int>(w.cols()) != basis.nf)
        throw std::invalid_argument("weight row length must match the feature count");

    Controller c;
    c.kind = kind;
    c.eval = [w, basis, plant, argmin](const StateVec& x) {
        const RowVec p = w * basis.jacobian(x) * plant.input_matrix(x);
        return argmin(p);
    };
    c.jacobian = [w, basis, plant, argmin, argmin_jacobian](const StateVec& x) {
        const RowVec p = w * basis.jacobian(x) * plant.input_matrix(x);
        const Command u = argmin(p);
        const Matrix dp_dx = w * basis.g_hessian_contraction(x, plant); // 1 x nx, nu = 1
        return Matrix(argmin_jacobian(p, u) * dp_dx);
    };
    return c;
}

} // namespace

Controller feature_tanh(const RowVec& w, const FeatureBasis& basis, const PlantModel& plant, double r) {
    if (!(r > 0.0))
        throw std::invalid_argument("command weight R must be positive");
    auto argmin = [r](const RowVec& p) {
        // tanh rounds to +-1 in floats for |z| > ~19; keep commands interior
        const double ao = saturation_limit();
        Command u(1);
        u(0) = std::clamp(-std::tanh(p(0) / (2.0 * r)), -ao, ao);
        return u;
    };
    auto argmin_jacobian = [r](const RowVec&, const Command& u) {
        Matrix j(1, 1);
        j(0, 0) = -(1.0 - u(0) * u(0)) / (2.0 * r);
        return j;
    };
    return feature_rule_controller(ControllerKind::feature_tanh, w, basis, plant, argmin, argmin_jacobian);
}

Controller feature_linear(const RowVec& w, const FeatureBasis& basis, const PlantModel& plant) {
    const int nu = plant.nu;
    auto argmin = [](const RowVec& p) { return Command(-p.transpose()); };
    auto argmin_jacobian = [nu](const RowVec&, const Command&) { return Matrix(-Matrix::Identity(nu, nu)); };
    return feature_rule_controller(ControllerKind::feature_linear, w, basis, plant, argmin, argmin_jacobian);
}

Controller improved_controller(const RowVec& w, const FeatureBasis& basis, const PlantModel& plant,
                               const LossModel& loss) {
    const ControllerKind kind = loss.minimizer == CommandRuleKind::tanh_box ? ControllerKind::feature_tanh
                                                                            : ControllerKind::feature_linear;
    return feature_rule_controller(kind, w, basis, plant, loss.argmin_command, loss.argmin_jacobian);
}

} // namespace gradctl
