#include "gradctl/verify.hpp"

#include "gradctl/controllers.hpp"
#include "gradctl/csv.hpp"
#include "gradctl/experiments.hpp"
#include "gradctl/features.hpp"
#include "gradctl/gradient_sweep.hpp"
#include "gradctl/learners.hpp"
#include "gradctl/rng.hpp"
#include "gradctl/rollout.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

namespace gradctl {

Matrix finite_difference_jacobian(const std::function<Vector(const StateVec&)>& f,
                                  const StateVec& x, double step) {
    const Vector f0 = f(x);
    Matrix j(f0.size(), x.size());
    for (long k = 0; k < x.size(); ++k) {
        StateVec hi = x, lo = x;
        hi(k) += step;
        lo(k) -= step;
        j.col(k) = (f(hi) - f(lo)) / (2.0 * step);
    }
    return j;
}

double relative_error(const Matrix& a, const Matrix& b) {
    const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

namespace {

std::string err_detail(double worst, double tol) {
    std::ostringstream ss;
    ss << "worst " << csv::format_double(worst) << " (tol " << csv::format_double(tol) << ")";
    return ss.str();
}

// --- 1-D analytic fixture: xdot = -x + u, L = x^2 + u^2, u = 0 -------------

PlantModel scalar_plant() {
    PlantModel p;
    p.nx = 1;
    p.nu = 1;
    p.drift = [](const StateVec& x) { return StateVec(-x); };
    p.input_matrix = [](const StateVec&) { return Matrix(Matrix::Ones(1, 1)); };
    p.drift_jacobian = [](const StateVec&) { return Matrix(-Matrix::Ones(1, 1)); };
    p.input_jacobian_contraction = [](const StateVec&, const Command&) {
        return Matrix(Matrix::Zero(1, 1));
    };
    return p;
}

LossModel scalar_quadratic_loss() {
    LossModel l;
    l.nu = 1;
    l.command_weight = 1.0;
    l.minimizer = CommandRuleKind::linear;
    l.rate = [](const StateVec& x, const Command& u) { return x.squaredNorm() + u.squaredNorm(); };
    l.dstate = [](const StateVec& x, const Command&) { return RowVec(2.0 * x.transpose()); };
    l.dcommand = [](const StateVec&, const Command& u) { return RowVec(2.0 * u.transpose()); };
    l.argmin_command = [](const RowVec& p) { return Command(-0.5 * p.transpose()); };
    l.argmin_jacobian = [](const RowVec&, const Command&) {
        return Matrix(-0.5 * Matrix::Identity(1, 1));
    };
    return l;
}

FeatureBasis scalar_square_feature() {
    FeatureBasis b;
    b.nf = 1;
    b.nx = 1;
    b.eval = [](const StateVec& x) {
        Vector v(1);
        v(0) = x(0) * x(0);
        return v;
    };
    b.jacobian = [](const StateVec& x) {
        Matrix j(1, 1);
        j(0, 0) = 2.0 * x(0);
        return j;
    };
    b.hessian_contraction = [](const StateVec&, const StateVec& g) {
        Matrix h(1, 1);
        h(0, 0) = 2.0 * g(0);
        return h;
    };
    b.g_hessian_contraction = [b_h = b.hessian_contraction](const StateVec& x, const PlantModel& plant) {
        return b_h(x, StateVec(plant.input_matrix(x).col(0)));
    };
    return b;
}

Controller zero_controller(int nx) {
    return saturated_linear(RowVec::Zero(nx), 1.0);
}

// --- (a) analytic Jacobians vs central finite differences ------------------

CheckResult check_plant_jacobians() {
    SeededRng rng(11);
    double worst = 0.0;
    for (const Problem& prob : {make_oscillator_problem(), make_integrator_problem()}) {
        for (int i = 0; i < 100; ++i) {
            StateVec x(2);
            x << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
            worst = std::max(worst,
                             relative_error(finite_difference_jacobian(prob.plant.drift, x),
                                            prob.plant.drift_jacobian(x)));
        }
    }
    const double tol = 1e-5;
    return {"plant drift Jacobians vs finite differences", worst < tol, err_detail(worst, tol)};
}

CheckResult check_loss_derivatives() {
    SeededRng rng(12);
    double worst = 0.0;
    const LossModel losses[2] = {make_oscillator_loss(), make_integrator_loss(100.0, 1.0)};
    for (const LossModel& loss : losses) {
        for (int i = 0; i < 100; ++i) {
            StateVec x(2);
            x << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
            Command u(1);
            u(0) = rng.uniform(-0.9, 0.9);
            auto fx = [&](const StateVec& xx) {
                Vector v(1);
                v(0) = loss.rate(xx, u);
                return v;
            };
            auto fu = [&](const StateVec& uu) {
                Vector v(1);
                v(0) = loss.rate(x, uu);
                return v;
            };
            worst = std::max(worst, relative_error(finite_difference_jacobian(fx, x),
                                                   Matrix(loss.dstate(x, u))));
            worst = std::max(worst, relative_error(finite_difference_jacobian(fu, u),
                                                   Matrix(loss.dcommand(x, u))));
        }
    }
    const double tol = 1e-5;
    return {"loss partial derivatives vs finite differences", worst < tol, err_detail(worst, tol)};
}

CheckResult check_feature_jacobians() {
    SeededRng rng(13);
    const PlantModel plant = make_oscillator_plant();
    const Matrix w_theta = sample_feature_matrix(20, 2, 5.0, rng);
    const FeatureBasis bases[2] = {monomial_basis(8), logcosh_basis(w_theta)};
    double worst_jac = 0.0, worst_hess = 0.0;
    for (const FeatureBasis& basis : bases) {
        for (int i = 0; i < 100; ++i) {
            StateVec x(2);
            x << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
            worst_jac = std::max(worst_jac, relative_error(finite_difference_jacobian(basis.eval, x),
                                                           basis.jacobian(x)));
            auto jac_g = [&](const StateVec& xx) {
                return Vector(basis.jacobian(xx) * plant.input_matrix(xx));
            };
            worst_hess = std::max(worst_hess, relative_error(finite_difference_jacobian(jac_g, x),
                                                             basis.g_hessian_contraction(x, plant)));
        }
    }
    const bool ok = worst_jac < 1e-6 && worst_hess < 1e-5;
    return {"feature Jacobians and G-contractions vs finite differences", ok,
            err_detail(std::max(worst_jac, worst_hess), 1e-5)};
}

CheckResult check_controller_jacobians() {
    SeededRng rng(14);
    const PlantModel plant = make_oscillator_plant();
    const FeatureBasis basis = monomial_basis(6);
    RowVec w(basis.nf);
    for (int i = 0; i < basis.nf; ++i)
        w(i) = rng.uniform(-1.0, 1.0);

    const Controller controllers[3] = {make_oscillator_problem().initial, feature_tanh(w, basis, plant, 1.0),
                                       feature_linear(w, basis, plant)};
    double worst = 0.0;
    for (const Controller& c : controllers) {
        int tested = 0;
        while (tested < 100) {
            StateVec x(2);
            x << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
            if (c.kind == ControllerKind::saturated_linear) {
                // keep clear of the saturation kink
                const double z = -5.0 * x(0) - 3.0 * x(1);
                if (std::abs(std::abs(z) - 1.0) < 1e-3)
                    continue;
            }
            worst = std::max(worst,
                             relative_error(finite_difference_jacobian(c.eval, x), c.jacobian(x)));
            ++tested;
        }
    }
    const double tol = 1e-5;
    return {"controller Jacobians vs finite differences", worst < tol, err_detail(worst, tol)};
}

CheckResult check_closed_loop_jacobians() {
    SeededRng rng(15);
    const Problem problem = make_oscillator_problem();
    const ClosedLoopSystem sys{problem.plant, problem.loss, problem.initial};
    double worst = 0.0;
    int tested = 0;
    while (tested < 100) {
        StateVec x(2);
        x << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
        const double z = -5.0 * x(0) - 3.0 * x(1);
        if (std::abs(std::abs(z) - 1.0) < 1e-3)
            continue;
        auto vel = [&](const StateVec& xx) { return sys.velocity(xx); };
        auto loss = [&](const StateVec& xx) {
            Vector v(1);
            v(0) = sys.loss_rate(xx);
            return v;
        };
        worst = std::max(worst, relative_error(finite_difference_jacobian(vel, x),
                                               sys.velocity_jacobian(x)));
        worst = std::max(worst, relative_error(finite_difference_jacobian(loss, x),
                                               Matrix(sys.loss_gradient(x))));
        ++tested;
    }
    const double tol = 1e-4;
    return {"closed-loop total derivatives vs finite differences", worst < tol,
            err_detail(worst, tol)};
}

// --- (b) 1-D analytic oracle ------------------------------------------------

CheckResult check_scalar_rollout_cost() {
    const ClosedLoopSystem sys{scalar_plant(), scalar_quadratic_loss(), zero_controller(1)};
    IntegrationConfig cfg;
    double worst = 0.0;
    for (double x0v : {0.5, 1.0, 2.0}) {
        StateVec x0(1);
        x0 << x0v;
        const double cost = integrate_closed_loop(sys, x0, cfg).total_cost;
        worst = std::max(worst, std::abs(cost - 0.5 * x0v * x0v));
    }
    const double tol = 1e-3;
    return {"1-D rollout cost equals x0^2/2", worst < tol, err_detail(worst, tol)};
}

CheckResult check_scalar_sweep_gradient() {
    const ClosedLoopSystem sys{scalar_plant(), scalar_quadratic_loss(), zero_controller(1)};
    IntegrationConfig cfg;
    StateVec x0(1);
    x0 << 1.0;
    const SweepResult swept = sweep(sys, x0, cfg);
    double worst = 0.0;
    for (const GradientSample& s : swept.samples)
        worst = std::max(worst, std::abs(s.grad(0) - s.state(0)));
    const double tol = 1e-3;
    return {"1-D sweep gradient equals x", worst < tol, err_detail(worst, tol)};
}

CheckResult check_scalar_fit_recovery() {
    const Problem problem{"scalar", scalar_plant(), scalar_quadratic_loss(), IntegrationConfig{},
                          {},       zero_controller(1)};
    const ClosedLoopSystem sys{problem.plant, problem.loss, zero_controller(1)};
    const FeatureBasis basis = scalar_square_feature();

    TrainingConfig cfg;
    cfg.sweeps_per_round = 20;
    cfg.training_box_halfwidth = 1.0;
    cfg.seed = 99;
    cfg.ghjb_samples = 2000;

    double worst = 0.0;
    for (Method m : {Method::ghjb, Method::direct_grad, Method::direct_grad_g}) {
        cfg.method = m;
        SeededRng rng(cfg.seed);
        const FitResult fit = m == Method::ghjb ? fit_ghjb(sys, basis, cfg, problem.integration, rng)
                                                : fit_direct(sys, basis, cfg, problem.integration, rng);
        worst = std::max(worst, std::abs(fit.weights(0) - 0.5));
    }
    const double tol = 1e-3;
    return {"1-D fits recover w = 1/2 (all three objectives)", worst < tol, err_detail(worst, tol)};
}

// --- (c) projection identities ----------------------------------------------

CheckResult check_projection_properties() {
    SeededRng rng(16);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        RowVec grad(2);
        grad << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
        StateVec xdot(2);
        xdot << rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0);
        if (xdot.norm() < 1e-6)
            continue;
        const double loss = rng.uniform(0.0, 2.0);

        const RowVec p1 = ghjb_project(grad, xdot, loss);
        worst = std::max(worst, std::abs(p1.dot(xdot) + loss));          // constraint holds
        worst = std::max(worst, (ghjb_project(p1, xdot, loss) - p1).cwiseAbs().maxCoeff()); // idempotent

        // minimality: any other constraint point is at least as far from grad
        RowVec tangent(2);
        tangent << -xdot(1), xdot(0);
        for (double t : {-1.0, -0.1, 0.1, 1.0}) {
            const RowVec other = p1 + t * tangent;
            if ((p1 - grad).norm() > (other - grad).norm() + 1e-12)
                worst = std::max(worst, (p1 - grad).norm() - (other - grad).norm());
        }
    }
    // exact-satisfaction example: already-consistent gradient is unchanged
    RowVec grad(2);
    grad << -1.0, 0.0;
    StateVec xdot(2);
    xdot << 1.0, 0.0;
    worst = std::max(worst, (ghjb_project(grad, xdot, 1.0) - grad).cwiseAbs().maxCoeff());

    const double tol = 1e-12;
    return {"GHJB projection: constraint, idempotence, minimality", worst < tol,
            err_detail(worst, tol)};
}

// --- (d) sweep gradients vs finite differences of rollout costs -------------

CheckResult check_sweep_vs_rollout_oracle() {
    const Problem problem = make_oscillator_problem();
    const ClosedLoopSystem sys{problem.plant, problem.loss, problem.initial};

    // Fine step for the two-route comparison; at step 0.1 the saturated
    // initial law leaves ripples in the discrete cost that swamp the
    // finite-difference route.
    IntegrationConfig fine = problem.integration;
    fine.step = 0.025;

    const double probes[4][2] = {{0.0, 1.0}, {0.5, 0.5}, {-0.4, 0.6}, {0.7, -0.3}};
    double worst = 0.0;
    for (const auto& p : probes) {
        StateVec x(2);
        x << p[0], p[1];
        const SweepResult swept = sweep(sys, x, fine);
        const RowVec grad = swept.samples.front().grad;

        RowVec fd(2);
        const double delta = 1e-2; // wide enough to smooth residual step ripples
        for (int j = 0; j < 2; ++j) {
            StateVec hi = x, lo = x;
            hi(j) += delta;
            lo(j) -= delta;
            const double chi = integrate_closed_loop(sys, hi, fine).total_cost;
            const double clo = integrate_closed_loop(sys, lo, fine).total_cost;
            fd(j) = (chi - clo) / (2.0 * delta);
        }
        worst = std::max(worst, (grad - fd).norm() / fd.norm());
    }
    const double tol = 0.02;
    return {"sweep gradient vs finite-difference-of-rollouts (|x| > 0.2)", worst < tol,
            err_detail(worst, tol)};
}

// --- (e) round-1 policy improvement ------------------------------------------

CheckResult check_round1_improvement() {
    bool ok = true;
    std::ostringstream detail;

    {
        const Problem problem = make_oscillator_problem();
        const FeatureBasis basis = monomial_basis(8);
        for (Method m : {Method::ghjb, Method::direct_grad_g}) {
            TrainingConfig cfg;
            cfg.method = m;
            cfg.rounds = 1;
            cfg.training_box_halfwidth = 1.0;
            cfg.seed = 7;
            const auto reports = run_policy_iteration(problem, basis, problem.initial, cfg);
            detail << method_name(m) << " 5.1: " << csv::format_double(reports[0].test_cost)
                   << " -> " << csv::format_double(reports[1].test_cost) << "; ";
            ok = ok && !reports[1].diverged && reports[1].test_cost < reports[0].test_cost;
        }
    }
    {
        const Problem problem = make_integrator_problem();
        SeededRng rng(21);
        const FeatureBasis basis = logcosh_basis(sample_feature_matrix(30, 2, 3.0, rng));
        for (Method m : {Method::ghjb, Method::direct_grad_g}) {
            TrainingConfig cfg;
            cfg.method = m;
            cfg.rounds = 1;
            cfg.training_box_halfwidth = 0.5;
            cfg.seed = 7;
            cfg.ridge = 0.01; // log-cosh normal equations need conditioning help
            const auto reports = run_policy_iteration(problem, basis, problem.initial, cfg);
            detail << method_name(m) << " 5.2: " << csv::format_double(reports[0].test_cost)
                   << " -> " << csv::format_double(reports[1].test_cost) << "; ";
            ok = ok && !reports[1].diverged && reports[1].test_cost < reports[0].test_cost;
        }
    }
    return {"round-1 policy improvement on both benchmarks", ok, detail.str()};
}

// --- (f) bit-exact determinism -----------------------------------------------

CheckResult check_determinism() {
    const Problem problem = make_integrator_problem();
    SeededRng rng(31);
    const FeatureBasis basis = logcosh_basis(sample_feature_matrix(12, 2, 5.0, rng));

    TrainingConfig cfg;
    cfg.method = Method::direct_grad_g;
    cfg.rounds = 2;
    cfg.sweeps_per_round = 20;
    cfg.training_box_halfwidth = 0.5;
    cfg.seed = 123;

    const auto a = run_policy_iteration(problem, basis, problem.initial, cfg);
    const auto b = run_policy_iteration(problem, basis, problem.initial, cfg);

    bool same = a.size() == b.size();
    if (same) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            same = same && a[i].round == b[i].round && a[i].diverged == b[i].diverged &&
                   a[i].samples_used == b[i].samples_used &&
                   std::memcmp(&a[i].test_cost, &b[i].test_cost, sizeof(double)) == 0 &&
                   a[i].weights.size() == b[i].weights.size();
            if (same && a[i].weights.size() > 0)
                same = std::memcmp(a[i].weights.data(), b[i].weights.data(),
                                   sizeof(double) * a[i].weights.size()) == 0;
        }
    }
    return {"bit-exact determinism of a repeated seeded run", same,
            same ? "identical round reports" : "round reports differ"};
}

} // namespace

std::vector<CheckResult> run_property_suite() {
    std::vector<CheckResult> results;
    results.push_back(check_plant_jacobians());
    results.push_back(check_loss_derivatives());
    results.push_back(check_feature_jacobians());
    results.push_back(check_controller_jacobians());
    results.push_back(check_closed_loop_jacobians());
    results.push_back(check_scalar_rollout_cost());
    results.push_back(check_scalar_sweep_gradient());
    results.push_back(check_scalar_fit_recovery());
    results.push_back(check_projection_properties());
    results.push_back(check_sweep_vs_rollout_oracle());
    results.push_back(check_round1_improvement());
    results.push_back(check_determinism());
    return results;
}

} // namespace gradctl
