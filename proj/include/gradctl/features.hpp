#pragma once

#include "gradctl/plants.hpp"
#include "gradctl/rng.hpp"
#include "gradctl/types.hpp"

#include <functional>

namespace gradctl {

// Differentiable feature vector theta(x) for value-gradient approximation.
struct FeatureBasis {
    int nf = 0;
    int nx = 0;
    std::function<Vector(const StateVec&)> eval;     // theta, nf
    std::function<Matrix(const StateVec&)> jacobian; // dtheta/dx, nf x nx
    // (x, g) -> nf x nx matrix whose row k is (H_k g)' with H_k the Hessian
    // of theta_k; the constant-direction contraction behind g_hessian_contraction.
    std::function<Matrix(const StateVec&, const StateVec&)> hessian_contraction;
    // d/dx of (dtheta/dx) G(x) for single-input plants; adds the dG/dx term
    // when the input matrix is state-dependent.
    std::function<Matrix(const StateVec&, const PlantModel&)> g_hessian_contraction;
};

// All bivariate monomials x1^a x2^b with a+b in {2, 4, ..., max_order},
// ordered by total order then descending x1 exponent
// (x1^2, x1 x2, x2^2, x1^4, x1^3 x2, ...). nf = 15 for order 6, 24 for order 8.
FeatureBasis monomial_basis(int max_order);

// theta_k(x) = log(cosh(w_k x)) for the rows w_k of W.
FeatureBasis logcosh_basis(const Matrix& weights);

// Entries i.i.d. uniform on [-scale, scale], sampled row-major.
Matrix sample_feature_matrix(int nf, int nx, double scale, SeededRng& rng);

} // namespace gradctl
