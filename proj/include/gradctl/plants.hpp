#pragma once

#include "gradctl/types.hpp"

#include <functional>

namespace gradctl {

// Control-affine plant: xdot = f(x) + G(x) u.
struct PlantModel {
    int nx = 0;
    int nu = 0;
    std::function<StateVec(const StateVec&)> drift;                // f, nx
    std::function<Matrix(const StateVec&)> input_matrix;           // G, nx x nu
    std::function<Matrix(const StateVec&)> drift_jacobian;         // df/dx, nx x nx
    // d(G u)/dx at fixed u; zero for constant G.
    std::function<Matrix(const StateVec&, const Command&)> input_jacobian_contraction;
};

// Family of the command minimizer u* = argmin_u { p u + penalty(u) } over U.
enum class CommandRuleKind {
    tanh_box, // saturated entropy-like penalty, U = (-1, 1)
    linear,   // quadratic penalty u'u/2, unconstrained
};

struct LossModel {
    int nu = 1;
    double command_weight = 1.0; // R
    CommandRuleKind minimizer = CommandRuleKind::tanh_box;
    std::function<double(const StateVec&, const Command&)> rate;    // L >= 0
    std::function<RowVec(const StateVec&, const Command&)> dstate;  // dL/dx, 1 x nx
    std::function<RowVec(const StateVec&, const Command&)> dcommand; // dL/du, 1 x nu
    // p = grad(J) G (1 x nu) -> the u minimizing grad(J) (f + G u) + L over U.
    std::function<Command(const RowVec&)> argmin_command;
    // d(u*)/dp at (p, u*), nu x nu; chain-rule piece for improved-law Jacobians.
    std::function<Matrix(const RowVec&, const Command&)> argmin_jacobian;
};

// Feedback law with analytic Jacobian.
enum class ControllerKind { saturated_linear, feature_tanh, feature_linear };

struct Controller {
    ControllerKind kind = ControllerKind::saturated_linear;
    std::function<Command(const StateVec&)> eval;       // u(x), nu
    std::function<Matrix(const StateVec&)> jacobian;    // Du/Dx, nu x nx
};

struct ClosedLoopEval {
    Command u;
    StateVec xdot;       // F = f + G u(x)
    double loss = 0.0;   // L(x, u(x))
    Matrix velocity_jacobian; // DF/Dx (total)
    RowVec loss_gradient;     // DL/Dx (total)
};

struct ClosedLoopFlow {
    Command u;
    StateVec xdot;
    double loss = 0.0;
};

// Plant + loss + controller, with the total derivatives used by the
// backward gradient equation.
struct ClosedLoopSystem {
    PlantModel plant;
    LossModel loss;
    Controller controller;

    Command command(const StateVec& x) const { return controller.eval(x); }
    StateVec velocity(const StateVec& x) const;
    double loss_rate(const StateVec& x) const;
    Matrix velocity_jacobian(const StateVec& x) const;
    RowVec loss_gradient(const StateVec& x) const;

    // Single-dispatch variants that share the command evaluation.
    ClosedLoopFlow flow(const StateVec& x) const;
    ClosedLoopEval evaluate(const StateVec& x) const;
};

// Largest command magnitude fed to atanh/log at the saturation boundary.
double saturation_limit(); // 1 - 1000 * machine epsilon

// 2u atanh(u) + log(1 - u^2), clamped to |u| <= saturation_limit().
// Throws std::domain_error at |u| >= 1.
double saturation_penalty(double u);
double saturation_penalty_slope(double u); // d/du = 2 atanh(u)

// Nonlinear oscillator with constrained input:
// xdot1 = x1 + x2 - x1 (x1^2 + x2^2), xdot2 = -x1 + x2 - x2 (x1^2 + x2^2) + u.
PlantModel make_oscillator_plant();

// L = tanh(x'x) + 2u atanh(u) + log(1 - u^2), U = (-1, 1).
LossModel make_oscillator_loss();

// Damped double integrator: xdot1 = x2, xdot2 = -x2 + u.
PlantModel make_integrator_plant();

// L = tanh(Q x'x) + R [2u atanh(u) + log(1 - u^2)].
LossModel make_integrator_loss(double q, double r);

} // namespace gradctl
