#include "gradctl/learners.hpp"

#include "gradctl/gradient_sweep.hpp"
#include "gradctl/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace gradctl {

std::string method_name(Method m) {
    switch (m) {
    case Method::ghjb: return "ghjb";
    case Method::direct_grad: return "direct_grad";
    case Method::direct_grad_g: return "direct_grad_g";
    }
    return "unknown";
}

Method method_from_name(const std::string& name) {
    if (name == "ghjb")
        return Method::ghjb;
    if (name == "direct_grad")
        return Method::direct_grad;
    if (name == "direct_grad_g" || name == "direct")
        return Method::direct_grad_g;
    throw std::invalid_argument("unknown method: " + name);
}

void NormalEquations::merge(const NormalEquations& other) {
    yy += other.yy;
    yr += other.yr;
    count += other.count;
}

void accumulate(NormalEquations& ne, const Eigen::Ref<const Matrix>& y,
                const Eigen::Ref<const RowVec>& r) {
    if (y.rows() != ne.yy.rows() || y.cols() != r.cols())
        throw std::invalid_argument("accumulate: inconsistent dimensions");
    ne.yy.noalias() += y * y.transpose();
    ne.yr.noalias() += r * y.transpose();
    ne.count += y.cols();
}

RowVec solve_weights(const NormalEquations& ne, double ridge) {
    if (ne.count <= 0)
        throw std::invalid_argument("solve_weights: no accumulated samples");
    const int nf = static_cast<int>(ne.yy.rows());

    if (ne.yy.isZero(0.0)) {
        std::cerr << "gradctl: warning: all-zero normal equations, returning zero weights\n";
        return RowVec::Zero(nf);
    }

    if (ridge > 0.0) {
        const Matrix lhs = ne.yy + ridge * Matrix::Identity(nf, nf);
        return lhs.ldlt().solve(ne.yr.transpose()).transpose();
    }

    // yy is symmetric PSD; pseudoinverse via eigendecomposition gives the
    // minimum-norm minimizer when yy is singular.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(ne.yy);
    const Vector& values = eig.eigenvalues();
    const double tol = nf * std::numeric_limits<double>::epsilon() * values.cwiseAbs().maxCoeff();
    Vector inv = Vector::Zero(nf);
    for (int i = 0; i < nf; ++i)
        inv(i) = values(i) > tol ? 1.0 / values(i) : 0.0;
    const Matrix pinv = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
    return ne.yr * pinv;
}

Problem make_oscillator_problem() {
    Problem p;
    p.name = "oscillator_5_1";
    p.plant = make_oscillator_plant();
    p.loss = make_oscillator_loss();
    p.integration = IntegrationConfig{};
    StateVec x0(2);
    x0 << 0.0, 1.0;
    p.test_states.push_back(x0);
    RowVec gain(2);
    gain << -5.0, -3.0;
    p.initial = saturated_linear(gain, 1.0);
    return p;
}

Problem make_integrator_problem(double q, double r) {
    Problem p;
    p.name = "integrator_5_2";
    p.plant = make_integrator_plant();
    p.loss = make_integrator_loss(q, r);
    p.integration = IntegrationConfig{};
    StateVec x0(2);
    x0 << 0.4, 0.4;
    p.test_states.push_back(x0);
    RowVec gain(2);
    gain << -1.0, -1.0;
    p.initial = saturated_linear(gain, 1.0);
    return p;
}

StateVec sample_training_state(int nx, double halfwidth, SampleWarp warp, SeededRng& rng) {
    StateVec x(nx);
    for (int i = 0; i < nx; ++i) {
        const double v = rng.uniform(-1.0, 1.0);
        x(i) = warp == SampleWarp::sine ? halfwidth * std::sin(0.5 * std::numbers::pi * v)
                                        : halfwidth * v;
    }
    return x;
}

FitResult fit_ghjb(const ClosedLoopSystem& sys, const FeatureBasis& basis, const TrainingConfig& cfg,
                   const IntegrationConfig& integration, SeededRng& rng) {
    long n = cfg.ghjb_samples;
    if (n <= 0)
        n = static_cast<long>(cfg.sweeps_per_round) * integration.step_count();

    // States drawn up front so the sampling stream is independent of the
    // worker count; accumulation is chunked and merged in chunk order.
    std::vector<StateVec> states;
    states.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
        states.push_back(sample_training_state(sys.plant.nx, cfg.training_box_halfwidth,
                                               cfg.ghjb_sample_warp, rng));

    const long chunk = 2048;
    const long nchunks = (n + chunk - 1) / chunk;
    std::vector<NormalEquations> partial(static_cast<std::size_t>(nchunks), NormalEquations(basis.nf));
    parallel_for(nchunks, [&](long c) {
        NormalEquations& ne = partial[static_cast<std::size_t>(c)];
        const long lo = c * chunk;
        const long hi = std::min(n, lo + chunk);
        for (long i = lo; i < hi; ++i) {
            const StateVec& x = states[static_cast<std::size_t>(i)];
            const ClosedLoopFlow f = sys.flow(x);
            const Vector y = basis.jacobian(x) * f.xdot; // theta-dot
            RowVec r(1);
            r(0) = -f.loss;
            accumulate(ne, y, r);
        }
    });

    NormalEquations ne(basis.nf);
    for (const NormalEquations& p : partial)
        ne.merge(p);

    FitResult out;
    out.weights = solve_weights(ne, cfg.ridge);
    out.samples_used = ne.count;
    return out;
}

FitResult fit_direct(const ClosedLoopSystem& sys, const FeatureBasis& basis, const TrainingConfig& cfg,
                     const IntegrationConfig& integration, SeededRng& rng) {
    const int sweeps = cfg.sweeps_per_round;
    std::vector<StateVec> starts;
    starts.reserve(static_cast<std::size_t>(sweeps));
    for (int i = 0; i < sweeps; ++i)
        starts.push_back(sample_training_state(sys.plant.nx, cfg.training_box_halfwidth,
                                               cfg.sample_warp, rng));

    const bool contract_g = cfg.method == Method::direct_grad_g;
    std::vector<NormalEquations> partial(static_cast<std::size_t>(sweeps), NormalEquations(basis.nf));
    parallel_for(sweeps, [&](long s) {
        const SweepResult swept = sweep(sys, starts[static_cast<std::size_t>(s)], integration);
        NormalEquations& ne = partial[static_cast<std::size_t>(s)];
        for (const GradientSample& sample : swept.samples) {
            const Matrix jac = basis.jacobian(sample.state);
            if (contract_g) {
                const Matrix y = jac * sys.plant.input_matrix(sample.state); // nf x nu
                accumulate(ne, y, sample.grad_g);
            } else {
                accumulate(ne, jac, sample.grad);
            }
        }
    });

    NormalEquations ne(basis.nf);
    for (const NormalEquations& p : partial)
        ne.merge(p);

    FitResult out;
    out.weights = solve_weights(ne, cfg.ridge);
    out.samples_used = ne.count;
    return out;
}

std::pair<double, bool> evaluate_controller(const Problem& problem, const Controller& controller) {
    const ClosedLoopSystem sys{problem.plant, problem.loss, controller};
    double total = 0.0;
    for (const StateVec& x0 : problem.test_states) {
        try {
            total += integrate_closed_loop(sys, x0, problem.integration).total_cost;
        } catch (const DivergedError&) {
            return {std::numeric_limits<double>::infinity(), true};
        }
    }
    const double mean = total / static_cast<double>(problem.test_states.size());
    if (!std::isfinite(mean))
        return {std::numeric_limits<double>::infinity(), true};
    return {mean, false};
}

std::vector<RoundReport> run_policy_iteration(const Problem& problem, const FeatureBasis& basis,
                                              const Controller& initial, const TrainingConfig& cfg) {
    if (cfg.rounds < 0)
        throw std::invalid_argument("rounds must be nonnegative");

    std::vector<RoundReport> reports;
    reports.reserve(static_cast<std::size_t>(cfg.rounds) + 1);

    Controller current = initial;
    {
        RoundReport first;
        first.round = 1;
        std::tie(first.test_cost, first.diverged) = evaluate_controller(problem, current);
        reports.push_back(std::move(first));
    }

    RowVec last_good = RowVec::Zero(basis.nf);
    for (int round = 1; round <= cfg.rounds; ++round) {
        const ClosedLoopSystem sys{problem.plant, problem.loss, current};
        SeededRng round_rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(round)}));

        RoundReport report;
        report.round = round + 1;
        bool fit_failed = false;
        try {
            const FitResult fit = cfg.method == Method::ghjb
                                      ? fit_ghjb(sys, basis, cfg, problem.integration, round_rng)
                                      : fit_direct(sys, basis, cfg, problem.integration, round_rng);
            last_good = fit.weights;
            report.samples_used = fit.samples_used;
        } catch (const SweepDivergedError&) {
            fit_failed = true;
        } catch (const DivergedError&) {
            fit_failed = true; // forward phase of a sweep escaped
        }

        report.weights = last_good;
        current = improved_controller(last_good, basis, problem.plant, problem.loss);
        std::tie(report.test_cost, report.diverged) = evaluate_controller(problem, current);
        report.diverged = report.diverged || fit_failed;
        reports.push_back(std::move(report));
    }
    return reports;
}

} // namespace gradctl
