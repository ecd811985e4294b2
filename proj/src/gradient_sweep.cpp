#include "gradctl/gradient_sweep.hpp"

#include <cmath>

namespace gradctl {

RowVec ghjb_project(const RowVec& grad, const StateVec& xdot, double loss_value) {
    if (xdot.norm() < 1e-12)
        return grad;
    const double residual = grad.dot(xdot) + loss_value;
    return grad - (residual / xdot.squaredNorm()) * xdot.transpose();
}

SweepResult sweep(const ClosedLoopSystem& sys, const StateVec& x0, const IntegrationConfig& cfg) {
    const TargetRollout forward = rollout_to_target(sys, x0, cfg);
    const Matrix& crumbs = forward.trajectory.states;
    const long steps = forward.trajectory.size() - 1;
    const double h = cfg.step;

    SweepResult result;
    result.reached_floor = forward.reached;
    result.steps = steps;
    result.samples.resize(static_cast<std::size_t>(steps) + 1);

    auto emit = [&](long index, const StateVec& x, const RowVec& grad) {
        GradientSample& s = result.samples[static_cast<std::size_t>(index)];
        s.state = x;
        s.grad = grad;
        s.grad_g = grad * sys.plant.input_matrix(x);
    };

    // Terminal boundary: grad J = 0 where further cost is negligible, then
    // fitted to the local constraint like every other breadcrumb.
    StateVec x = crumbs.row(steps).transpose();
    ClosedLoopEval at_x = sys.evaluate(x);
    RowVec grad = ghjb_project(RowVec::Zero(x.size()), at_x.xdot, at_x.loss);
    emit(steps, x, grad);

    for (long k = steps; k >= 1; --k) {
        // Backward step: grad integrated under the adjoint equation while x
        // retraces under -F; stage states follow the un-snapped backward path.
        const RowVec dj1 = at_x.loss_gradient + grad * at_x.velocity_jacobian;
        const RowVec grad2 = grad + h * dj1;
        const StateVec x2 = x - h * at_x.xdot;
        const ClosedLoopEval e2 = sys.evaluate(x2);
        const RowVec dj2 = e2.loss_gradient + grad2 * e2.velocity_jacobian;
        const RowVec grad3 = grad + h * (dj1 + dj2) / 4.0;
        const StateVec x3 = x - h * (at_x.xdot + e2.xdot) / 4.0;
        const ClosedLoopEval e3 = sys.evaluate(x3);
        const RowVec dj3 = e3.loss_gradient + grad3 * e3.velocity_jacobian;
        grad = grad + h * (dj1 + 4.0 * dj3 + dj2) / 6.0;

        if (!grad.allFinite())
            throw SweepDivergedError("gradient integration diverged", k);

        // Breadcrumb snap, then the minimum-norm GHJB fit at the snapped state.
        x = crumbs.row(k - 1).transpose();
        at_x = sys.evaluate(x);
        grad = ghjb_project(grad, at_x.xdot, at_x.loss);
        emit(k - 1, x, grad);
    }

    return result;
}

} // namespace gradctl
