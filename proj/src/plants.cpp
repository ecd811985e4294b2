#include "gradctl/plants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gradctl {

double saturation_limit() {
    return 1.0 - 1000.0 * std::numeric_limits<double>::epsilon();
}

namespace {

double clamp_to_interior(double u) {
    if (std::abs(u) >= 1.0)
        throw std::domain_error("command outside the open interval (-1, 1)");
    const double ao = saturation_limit();
    return std::clamp(u, -ao, ao);
}

} // namespace

double saturation_penalty(double u) {
    const double uc = clamp_to_interior(u);
    return 2.0 * uc * std::atanh(uc) + std::log1p(-uc * uc);
}

double saturation_penalty_slope(double u) {
    return 2.0 * std::atanh(clamp_to_interior(u));
}

StateVec ClosedLoopSystem::velocity(const StateVec& x) const {
    return plant.drift(x) + plant.input_matrix(x) * controller.eval(x);
}

double ClosedLoopSystem::loss_rate(const StateVec& x) const {
    return loss.rate(x, controller.eval(x));
}

Matrix ClosedLoopSystem::velocity_jacobian(const StateVec& x) const {
    const Command u = controller.eval(x);
    return plant.drift_jacobian(x) + plant.input_jacobian_contraction(x, u) +
           plant.input_matrix(x) * controller.jacobian(x);
}

RowVec ClosedLoopSystem::loss_gradient(const StateVec& x) const {
    const Command u = controller.eval(x);
    return loss.dstate(x, u) + loss.dcommand(x, u) * controller.jacobian(x);
}

ClosedLoopFlow ClosedLoopSystem::flow(const StateVec& x) const {
    ClosedLoopFlow out;
    out.u = controller.eval(x);
    out.xdot = plant.drift(x) + plant.input_matrix(x) * out.u;
    out.loss = loss.rate(x, out.u);
    return out;
}

ClosedLoopEval ClosedLoopSystem::evaluate(const StateVec& x) const {
    ClosedLoopEval out;
    out.u = controller.eval(x);
    const Matrix g = plant.input_matrix(x);
    const Matrix du = controller.jacobian(x);
    out.xdot = plant.drift(x) + g * out.u;
    out.loss = loss.rate(x, out.u);
    out.velocity_jacobian = plant.drift_jacobian(x) + plant.input_jacobian_contraction(x, out.u) + g * du;
    out.loss_gradient = loss.dstate(x, out.u) + loss.dcommand(x, out.u) * du;
    return out;
}

PlantModel make_oscillator_plant() {
    PlantModel p;
    p.nx = 2;
    p.nu = 1;
    p.drift = [](const StateVec& x) {
        const double r2 = x(0) * x(0) + x(1) * x(1);
        StateVec f(2);
        f(0) = x(0) + x(1) - x(0) * r2;
        f(1) = -x(0) + x(1) - x(1) * r2;
        return f;
    };
    p.input_matrix = [](const StateVec&) {
        Matrix g(2, 1);
        g << 0.0, 1.0;
        return g;
    };
    p.drift_jacobian = [](const StateVec& x) {
        Matrix j(2, 2);
        j(0, 0) = 1.0 - 3.0 * x(0) * x(0) - x(1) * x(1);
        j(0, 1) = 1.0 - 2.0 * x(0) * x(1);
        j(1, 0) = -1.0 - 2.0 * x(0) * x(1);
        j(1, 1) = 1.0 - x(0) * x(0) - 3.0 * x(1) * x(1);
        return j;
    };
    p.input_jacobian_contraction = [](const StateVec&, const Command&) {
        return Matrix::Zero(2, 2);
    };
    return p;
}

LossModel make_oscillator_loss() {
    LossModel l;
    l.nu = 1;
    l.command_weight = 1.0;
    l.minimizer = CommandRuleKind::tanh_box;
    l.rate = [](const StateVec& x, const Command& u) {
        return std::tanh(x.squaredNorm()) + saturation_penalty(u(0));
    };
    l.dstate = [](const StateVec& x, const Command&) -> RowVec {
        const double t = std::tanh(x.squaredNorm());
        return (1.0 - t * t) * 2.0 * x.transpose();
    };
    l.dcommand = [](const StateVec&, const Command& u) {
        RowVec d(1);
        d(0) = saturation_penalty_slope(u(0));
        return d;
    };
    l.argmin_command = [](const RowVec& p) {
        const double ao = saturation_limit();
        Command u(1);
        u(0) = std::clamp(-std::tanh(0.5 * p(0)), -ao, ao);
        return u;
    };
    l.argmin_jacobian = [](const RowVec&, const Command& u) {
        Matrix j(1, 1);
        j(0, 0) = -0.5 * (1.0 - u(0) * u(0));
        return j;
    };
    return l;
}

PlantModel make_integrator_plant() {
    PlantModel p;
    p.nx = 2;
    p.nu = 1;
    p.drift = [](const StateVec& x) {
        StateVec f(2);
        f(0) = x(1);
        f(1) = -x(1);
        return f;
    };
    p.input_matrix = [](const StateVec&) {
        Matrix g(2, 1);
        g << 0.0, 1.0;
        return g;
    };
    p.drift_jacobian = [](const StateVec&) {
        Matrix j(2, 2);
        j << 0.0, 1.0, 0.0, -1.0;
        return j;
    };
    p.input_jacobian_contraction = [](const StateVec&, const Command&) {
        return Matrix::Zero(2, 2);
    };
    return p;
}

LossModel make_integrator_loss(double q, double r) {
    if (!(q > 0.0) || !(r > 0.0))
        throw std::invalid_argument("integrator loss requires Q > 0 and R > 0");
    LossModel l;
    l.nu = 1;
    l.command_weight = r;
    l.minimizer = CommandRuleKind::tanh_box;
    l.rate = [q, r](const StateVec& x, const Command& u) {
        return std::tanh(q * x.squaredNorm()) + r * saturation_penalty(u(0));
    };
    l.dstate = [q](const StateVec& x, const Command&) -> RowVec {
        const double t = std::tanh(q * x.squaredNorm());
        return (1.0 - t * t) * 2.0 * q * x.transpose();
    };
    l.dcommand = [r](const StateVec&, const Command& u) {
        RowVec d(1);
        d(0) = r * saturation_penalty_slope(u(0));
        return d;
    };
    l.argmin_command = [r](const RowVec& p) {
        const double ao = saturation_limit();
        Command u(1);
        u(0) = std::clamp(-std::tanh(p(0) / (2.0 * r)), -ao, ao);
        return u;
    };
    l.argmin_jacobian = [r](const RowVec&, const Command& u) {
        Matrix j(1, 1);
        j(0, 0) = -(1.0 - u(0) * u(0)) / (2.0 * r);
        return j;
    };
    return l;
}

} // namespace gradctl
