#include "gradctl/rollout.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gradctl {

long IntegrationConfig::step_count() const {
    if (!(step > 0.0))
        throw std::invalid_argument("integration step must be positive");
    if (horizon < step)
        throw std::invalid_argument("horizon must be at least one step");
    if (loss_floor < 0.0)
        throw std::invalid_argument("loss floor must be nonnegative");
    return std::lround(horizon / step);
}

namespace {

struct StepOutcome {
    StateVec x;            // post-step state
    double cost_increment; // Simpson-weighted h-scaled loss
};

StepOutcome three_stage_step(const ClosedLoopSystem& sys, const StateVec& x,
                             const ClosedLoopFlow& at_x, double h) {
    const StateVec x2 = x + h * at_x.xdot;
    const ClosedLoopFlow f2 = sys.flow(x2);
    const StateVec x3 = x + h * (at_x.xdot + f2.xdot) / 4.0;
    const ClosedLoopFlow f3 = sys.flow(x3);
    StepOutcome out;
    out.x = x + h * (at_x.xdot + 4.0 * f3.xdot + f2.xdot) / 6.0;
    out.cost_increment = h * (at_x.loss + 4.0 * f3.loss + f2.loss) / 6.0;
    return out;
}

StepOutcome rk4_step(const ClosedLoopSystem& sys, const StateVec& x,
                     const ClosedLoopFlow& at_x, double h) {
    const ClosedLoopFlow f2 = sys.flow(x + 0.5 * h * at_x.xdot);
    const ClosedLoopFlow f3 = sys.flow(x + 0.5 * h * f2.xdot);
    const ClosedLoopFlow f4 = sys.flow(x + h * f3.xdot);
    StepOutcome out;
    out.x = x + h * (at_x.xdot + 2.0 * f2.xdot + 2.0 * f3.xdot + f4.xdot) / 6.0;
    out.cost_increment = h * (at_x.loss + 2.0 * f2.loss + 2.0 * f3.loss + f4.loss) / 6.0;
    return out;
}

Trajectory run(const ClosedLoopSystem& sys, const StateVec& x0, const IntegrationConfig& cfg,
               bool stop_at_floor, bool* reached) {
    if (!x0.allFinite())
        throw std::invalid_argument("initial state must be finite");

    const long max_steps = cfg.step_count();
    const double h = cfg.step;
    const int nx = static_cast<int>(x0.size());

    std::vector<StateVec> states;
    std::vector<Command> commands;
    std::vector<double> cost;
    states.reserve(max_steps + 1);
    commands.reserve(max_steps + 1);
    cost.reserve(max_steps + 1);

    StateVec x = x0;
    ClosedLoopFlow at_x = sys.flow(x);
    double c = 0.0;
    if (reached)
        *reached = stop_at_floor && at_x.loss < cfg.loss_floor;

    states.push_back(x);
    commands.push_back(at_x.u);
    cost.push_back(c);

    for (long step = 1; step <= max_steps; ++step) {
        const StepOutcome next = cfg.scheme == IntegrationScheme::three_stage
                                     ? three_stage_step(sys, x, at_x, h)
                                     : rk4_step(sys, x, at_x, h);
        x = next.x;
        c += next.cost_increment;
        if (!x.allFinite() || x.norm() > cfg.divergence_norm)
            throw DivergedError("closed-loop state diverged", step);

        at_x = sys.flow(x);
        states.push_back(x);
        commands.push_back(at_x.u);
        cost.push_back(c);

        if (stop_at_floor && at_x.loss < cfg.loss_floor) {
            if (reached)
                *reached = true;
            break;
        }
    }

    const long nt = static_cast<long>(states.size());
    Trajectory traj;
    traj.times = Vector(nt);
    for (long i = 0; i < nt; ++i)
        traj.times(i) = h * static_cast<double>(i);
    traj.states = Matrix(nt, nx);
    traj.commands = Matrix(nt, commands.front().size());
    traj.cumulative_cost = Vector(nt);
    for (long i = 0; i < nt; ++i) {
        traj.states.row(i) = states[static_cast<std::size_t>(i)].transpose();
        traj.commands.row(i) = commands[static_cast<std::size_t>(i)].transpose();
        traj.cumulative_cost(i) = cost[static_cast<std::size_t>(i)];
    }
    traj.total_cost = cost.back();
    return traj;
}

} // namespace

Trajectory integrate_closed_loop(const ClosedLoopSystem& sys, const StateVec& x0,
                                 const IntegrationConfig& cfg) {
    return run(sys, x0, cfg, false, nullptr);
}

TargetRollout rollout_to_target(const ClosedLoopSystem& sys, const StateVec& x0,
                                const IntegrationConfig& cfg) {
    TargetRollout out;
    out.trajectory = run(sys, x0, cfg, true, &out.reached);
    return out;
}

} // namespace gradctl
