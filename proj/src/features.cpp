#include "gradctl/features.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gradctl {

namespace {

double ipow(double base, int e) {
    double out = 1.0;
    for (int i = 0; i < e; ++i)
        out *= base;
    return out;
}

// log(cosh(z)) without overflow: |z| + log((1 + e^{-2|z|}) / 2).
double logcosh(double z) {
    const double a = std::abs(z);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// Wires up the plant-facing contraction once eval/jacobian/hessian exist.
void attach_g_contraction(FeatureBasis& basis) {
    auto jac = basis.jacobian;
    auto hess = basis.hessian_contraction;
    basis.g_hessian_contraction = [jac, hess](const StateVec& x, const PlantModel& plant) {
        if (plant.nu != 1)
            throw std::invalid_argument("g_hessian_contraction supports single-input plants only");
        const Matrix g = plant.input_matrix(x);
        Matrix out = hess(x, g.col(0));
        const Matrix dg = plant.input_jacobian_contraction(x, Command::Ones(1));
        if (!dg.isZero(0.0))
            out += jac(x) * dg;
        return out;
    };
}

} // namespace

FeatureBasis monomial_basis(int max_order) {
    if (max_order < 2 || max_order > 8 || max_order % 2 != 0)
        throw std::invalid_argument("monomial basis order must be one of 2, 4, 6, 8");

    std::vector<std::pair<int, int>> exponents;
    for (int order = 2; order <= max_order; order += 2)
        for (int a = order; a >= 0; --a)
            exponents.emplace_back(a, order - a);

    FeatureBasis basis;
    basis.nf = static_cast<int>(exponents.size());
    basis.nx = 2;
    basis.eval = [exponents](const StateVec& x) {
        Vector theta(static_cast<int>(exponents.size()));
        for (std::size_t k = 0; k < exponents.size(); ++k)
            theta(static_cast<int>(k)) = ipow(x(0), exponents[k].first) * ipow(x(1), exponents[k].second);
        return theta;
    };
    basis.jacobian = [exponents](const StateVec& x) {
        Matrix j(static_cast<int>(exponents.size()), 2);
        for (std::size_t k = 0; k < exponents.size(); ++k) {
            const auto [a, b] = exponents[k];
            j(static_cast<int>(k), 0) = a == 0 ? 0.0 : a * ipow(x(0), a - 1) * ipow(x(1), b);
            j(static_cast<int>(k), 1) = b == 0 ? 0.0 : b * ipow(x(0), a) * ipow(x(1), b - 1);
        }
        return j;
    };
    basis.hessian_contraction = [exponents](const StateVec& x, const StateVec& g) {
        Matrix out(static_cast<int>(exponents.size()), 2);
        for (std::size_t k = 0; k < exponents.size(); ++k) {
            const auto [a, b] = exponents[k];
            const double h11 = a < 2 ? 0.0 : a * (a - 1) * ipow(x(0), a - 2) * ipow(x(1), b);
            const double h12 = (a < 1 || b < 1) ? 0.0 : a * b * ipow(x(0), a - 1) * ipow(x(1), b - 1);
            const double h22 = b < 2 ? 0.0 : b * (b - 1) * ipow(x(0), a) * ipow(x(1), b - 2);
            out(static_cast<int>(k), 0) = h11 * g(0) + h12 * g(1);
            out(static_cast<int>(k), 1) = h12 * g(0) + h22 * g(1);
        }
        return out;
    };
    attach_g_contraction(basis);
    return basis;
}

FeatureBasis logcosh_basis(const Matrix& weights) {
    if (!weights.allFinite())
        throw std::invalid_argument("log-cosh feature matrix must be finite");

    FeatureBasis basis;
    basis.nf = static_cast<int>(weights.rows());
    basis.nx = static_cast<int>(weights.cols());
    basis.eval = [weights](const StateVec& x) {
        Vector theta(weights.rows());
        const Vector z = weights * x;
        for (int k = 0; k < z.size(); ++k)
            theta(k) = logcosh(z(k));
        return theta;
    };
    basis.jacobian = [weights](const StateVec& x) {
        const Vector z = weights * x;
        Matrix j(weights.rows(), weights.cols());
        for (int k = 0; k < z.size(); ++k)
            j.row(k) = std::tanh(z(k)) * weights.row(k);
        return j;
    };
    basis.hessian_contraction = [weights](const StateVec& x, const StateVec& g) {
        const Vector z = weights * x;
        const Vector wg = weights * g;
        Matrix out(weights.rows(), weights.cols());
        for (int k = 0; k < z.size(); ++k) {
            const double t = std::tanh(z(k));
            out.row(k) = (1.0 - t * t) * wg(k) * weights.row(k);
        }
        return out;
    };
    attach_g_contraction(basis);
    return basis;
}

Matrix sample_feature_matrix(int nf, int nx, double scale, SeededRng& rng) {
    if (nf < 1 || nx < 1)
        throw std::invalid_argument("feature matrix dimensions must be positive");
    if (!(scale > 0.0))
        throw std::invalid_argument("feature scale must be positive");
    Matrix w(nf, nx);
    for (int i = 0; i < nf; ++i)
        for (int j = 0; j < nx; ++j)
            w(i, j) = rng.uniform(-scale, scale);
    return w;
}

} // namespace gradctl
