#include "gradctl/rollout.hpp"

#include "gradctl/controllers.hpp"
#include "gradctl/learners.hpp"

#include <doctest.h>

#include <cmath>

using namespace gradctl;

namespace {

StateVec state2(double a, double b) {
    StateVec x(2);
    x << a, b;
    return x;
}

// xdot = -x, L = x^2, u == 0: J(x) = x^2 / 2 in closed form.
ClosedLoopSystem scalar_decay_system() {
    PlantModel plant;
    plant.nx = 1;
    plant.nu = 1;
    plant.drift = [](const StateVec& x) { return StateVec(-x); };
    plant.input_matrix = [](const StateVec&) { return Matrix(Matrix::Ones(1, 1)); };
    plant.drift_jacobian = [](const StateVec&) { return Matrix(-Matrix::Ones(1, 1)); };
    plant.input_jacobian_contraction = [](const StateVec&, const Command&) {
        return Matrix(Matrix::Zero(1, 1));
    };

    LossModel loss;
    loss.nu = 1;
    loss.minimizer = CommandRuleKind::linear;
    loss.rate = [](const StateVec& x, const Command&) { return x.squaredNorm(); };
    loss.dstate = [](const StateVec& x, const Command&) { return RowVec(2.0 * x.transpose()); };
    loss.dcommand = [](const StateVec&, const Command&) { return RowVec(RowVec::Zero(1)); };
    loss.argmin_command = [](const RowVec&) { return Command(Command::Zero(1)); };
    loss.argmin_jacobian = [](const RowVec&, const Command&) { return Matrix(Matrix::Zero(1, 1)); };

    return ClosedLoopSystem{plant, loss, saturated_linear(RowVec::Zero(1), 1.0)};
}

} // namespace

TEST_CASE("1-D analytic cost: total cost equals x0^2/2") {
    const ClosedLoopSystem sys = scalar_decay_system();
    IntegrationConfig cfg;
    for (double x0v : {0.5, 1.0, 2.0}) {
        StateVec x0(1);
        x0 << x0v;
        const Trajectory traj = integrate_closed_loop(sys, x0, cfg);
        CHECK(std::abs(traj.total_cost - 0.5 * x0v * x0v) < 1e-3);
    }
}

TEST_CASE("trajectory bookkeeping: times, monotone cost, totals") {
    const ClosedLoopSystem sys = scalar_decay_system();
    IntegrationConfig cfg;
    StateVec x0(1);
    x0 << 1.0;
    const Trajectory traj = integrate_closed_loop(sys, x0, cfg);

    CHECK(traj.size() == cfg.step_count() + 1);
    CHECK(traj.times(0) == 0.0);
    CHECK(traj.times(1) == doctest::Approx(cfg.step));
    for (long i = 1; i < traj.size(); ++i)
        CHECK(traj.cumulative_cost(i) >= traj.cumulative_cost(i - 1));
    CHECK(traj.total_cost == traj.cumulative_cost(traj.size() - 1));
    CHECK(traj.states(0, 0) == 1.0);
}

TEST_CASE("zero initial state on a benchmark stays at the fixed point") {
    const Problem problem = make_oscillator_problem();
    const ClosedLoopSystem sys{problem.plant, problem.loss, problem.initial};
    const Trajectory traj = integrate_closed_loop(sys, state2(0, 0), problem.integration);
    CHECK(traj.total_cost == 0.0);
    CHECK(traj.states.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("oscillator test movement with the initial law stabilizes") {
    const Problem problem = make_oscillator_problem();
    const ClosedLoopSystem sys{problem.plant, problem.loss, problem.initial};
    const Trajectory traj = integrate_closed_loop(sys, state2(0.0, 1.0), problem.integration);
    const long last = traj.size() - 1;
    CHECK(traj.states.row(last).norm() < 0.05);
    CHECK(std::isfinite(traj.total_cost));
    CHECK(traj.total_cost > 0.0);
}

TEST_CASE("halving the step changes benchmark costs by well under 0.5%") {
    const Problem problem = make_oscillator_problem();
    const ClosedLoopSystem sys{problem.plant, problem.loss, problem.initial};
    IntegrationConfig coarse = problem.integration;
    IntegrationConfig fine = coarse;
    fine.step = coarse.step / 2.0;
    const double c0 = integrate_closed_loop(sys, state2(0, 1), coarse).total_cost;
    const double c1 = integrate_closed_loop(sys, state2(0, 1), fine).total_cost;
    CHECK(std::abs(c0 - c1) / c1 < 0.005);
}

TEST_CASE("rk4 cross-check agrees with the reference scheme") {
    const Problem problem = make_oscillator_problem();
    const ClosedLoopSystem sys{problem.plant, problem.loss, problem.initial};
    IntegrationConfig rk = problem.integration;
    rk.scheme = IntegrationScheme::rk4;
    const double a = integrate_closed_loop(sys, state2(0, 1), problem.integration).total_cost;
    const double b = integrate_closed_loop(sys, state2(0, 1), rk).total_cost;
    CHECK(std::abs(a - b) / b < 0.005);
}

TEST_CASE("rollout_to_target stops at the loss floor") {
    const Problem problem = make_oscillator_problem();
    const ClosedLoopSystem sys{problem.plant, problem.loss, problem.initial};

    const TargetRollout run = rollout_to_target(sys, state2(0.0, 1.0), problem.integration);
    CHECK(run.reached);
    CHECK(run.trajectory.size() - 1 < 400);

    // the truncated cost is bounded by the full-horizon cost plus the floor
    const double full = integrate_closed_loop(sys, state2(0.0, 1.0), problem.integration).total_cost;
    const long remaining = problem.integration.step_count() - (run.trajectory.size() - 1);
    CHECK(run.trajectory.total_cost <= full);
    CHECK(full <= run.trajectory.total_cost +
                      static_cast<double>(remaining) * problem.integration.step *
                          problem.integration.loss_floor * 1.5);

    const TargetRollout at_origin = rollout_to_target(sys, state2(0, 0), problem.integration);
    CHECK(at_origin.reached);
    CHECK(at_origin.trajectory.size() == 2); // one mandatory step, then the floor test
}

TEST_CASE("destabilizing gain fails to reach the floor") {
    const Problem problem = make_oscillator_problem();
    RowVec bad(2);
    bad << 5.0, 3.0;
    const ClosedLoopSystem sys{problem.plant, problem.loss, saturated_linear(bad, 1.0)};
    bool reached_or_diverged = false;
    try {
        const TargetRollout run = rollout_to_target(sys, state2(0.0, 1.0), problem.integration);
        reached_or_diverged = !run.reached;
    } catch (const DivergedError&) {
        reached_or_diverged = true;
    }
    CHECK(reached_or_diverged);
}

TEST_CASE("divergence raises with the step index") {
    // xdot = +x^3 escapes in finite time
    PlantModel plant;
    plant.nx = 1;
    plant.nu = 1;
    plant.drift = [](const StateVec& x) { return StateVec(x.array().cube()); };
    plant.input_matrix = [](const StateVec&) { return Matrix(Matrix::Zero(1, 1)); };
    plant.drift_jacobian = [](const StateVec& x) {
        return Matrix(3.0 * x(0) * x(0) * Matrix::Ones(1, 1));
    };
    plant.input_jacobian_contraction = [](const StateVec&, const Command&) {
        return Matrix(Matrix::Zero(1, 1));
    };
    LossModel loss;
    loss.minimizer = CommandRuleKind::linear;
    loss.rate = [](const StateVec& x, const Command&) { return x.squaredNorm(); };
    loss.dstate = [](const StateVec& x, const Command&) { return RowVec(2.0 * x.transpose()); };
    loss.dcommand = [](const StateVec&, const Command&) { return RowVec(RowVec::Zero(1)); };
    loss.argmin_command = [](const RowVec&) { return Command(Command::Zero(1)); };
    loss.argmin_jacobian = [](const RowVec&, const Command&) { return Matrix(Matrix::Zero(1, 1)); };

    const ClosedLoopSystem sys{plant, loss, saturated_linear(RowVec::Zero(1), 1.0)};
    StateVec x0(1);
    x0 << 2.0;
    CHECK_THROWS_AS(integrate_closed_loop(sys, x0, IntegrationConfig{}), DivergedError);
    try {
        integrate_closed_loop(sys, x0, IntegrationConfig{});
    } catch (const DivergedError& e) {
        CHECK(e.step_index() >= 1);
        CHECK(e.step_index() <= 400);
    }
}
