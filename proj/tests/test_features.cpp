#include "gradctl/features.hpp"

#include "gradctl/rng.hpp"
#include "gradctl/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace gradctl;

namespace {

StateVec state2(double a, double b) {
    StateVec x(2);
    x << a, b;
    return x;
}

} // namespace

TEST_CASE("monomial basis sizes and ordering") {
    CHECK(monomial_basis(6).nf == 15);
    CHECK(monomial_basis(8).nf == 24);
    CHECK(monomial_basis(2).nf == 3);
    CHECK_THROWS_AS(monomial_basis(3), std::invalid_argument);
    CHECK_THROWS_AS(monomial_basis(10), std::invalid_argument);

    // at (1, 0) only the pure-x1 monomials survive: positions of x1^2, x1^4, x1^6
    const FeatureBasis b6 = monomial_basis(6);
    const Vector theta = b6.eval(state2(1.0, 0.0));
    for (int k = 0; k < b6.nf; ++k) {
        const bool pure_x1 = (k == 0 || k == 3 || k == 8);
        CHECK(theta(k) == (pure_x1 ? 1.0 : 0.0));
    }
}

TEST_CASE("monomial bases nest: order-8 extends order-6") {
    const FeatureBasis b6 = monomial_basis(6);
    const FeatureBasis b8 = monomial_basis(8);
    SeededRng rng(3);
    for (int i = 0; i < 20; ++i) {
        const StateVec x = state2(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const Vector t6 = b6.eval(x);
        const Vector t8 = b8.eval(x);
        CHECK((t8.head(15) - t6).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("monomial features and gradients vanish at the origin") {
    const FeatureBasis b = monomial_basis(8);
    CHECK(b.eval(state2(0, 0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(b.jacobian(state2(0, 0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("log-cosh basis: values, stability, derivatives") {
    Matrix w(1, 2);
    w << 1.0, 0.0;
    const FeatureBasis b = logcosh_basis(w);

    CHECK(b.eval(state2(0, 0))(0) == doctest::Approx(0.0));
    CHECK(b.jacobian(state2(0, 0)).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    // scalar evaluation against the naive formula where it is safe
    CHECK(b.eval(state2(0.5, 0.0))(0) == doctest::Approx(std::log(std::cosh(0.5))).epsilon(1e-12));
    // stable at pre-activations that overflow cosh
    Matrix wbig(1, 2);
    wbig << 1000.0, 0.0;
    const FeatureBasis big = logcosh_basis(wbig);
    const double v = big.eval(state2(1.0, 0.0))(0);
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(1000.0 - std::log(2.0)));

    CHECK_THROWS_AS(logcosh_basis(Matrix::Constant(2, 2, std::nan(""))), std::invalid_argument);
}

TEST_CASE("feature Jacobians match finite differences on random states") {
    SeededRng rng(7);
    const PlantModel plant = make_oscillator_plant();
    const FeatureBasis bases[2] = {monomial_basis(8), logcosh_basis(sample_feature_matrix(12, 2, 5.0, rng))};
    for (const FeatureBasis& b : bases) {
        for (int i = 0; i < 100; ++i) {
            const StateVec x = state2(rng.uniform(-1, 1), rng.uniform(-1, 1));
            CHECK(relative_error(finite_difference_jacobian(b.eval, x), b.jacobian(x)) < 1e-6);
            auto jac_g = [&](const StateVec& xx) {
                return Vector(b.jacobian(xx) * plant.input_matrix(xx));
            };
            CHECK(relative_error(finite_difference_jacobian(jac_g, x),
                                 b.g_hessian_contraction(x, plant)) < 1e-5);
        }
    }
}

TEST_CASE("sample_feature_matrix: determinism, range, non-degeneracy") {
    SeededRng a(42), b(42), c(43);
    const Matrix wa = sample_feature_matrix(50, 2, 5.0, a);
    const Matrix wb = sample_feature_matrix(50, 2, 5.0, b);
    const Matrix wc = sample_feature_matrix(50, 2, 5.0, c);

    CHECK(wa.rows() == 50);
    CHECK(wa.cols() == 2);
    CHECK((wa - wb).cwiseAbs().maxCoeff() == 0.0);
    CHECK((wa - wc).cwiseAbs().maxCoeff() > 0.0);
    CHECK(wa.cwiseAbs().maxCoeff() <= 5.0);
}
