#include "gradctl/controllers.hpp"

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

RowVec gain2(double a, double b) {
    RowVec g(2);
    g << a, b;
    return g;
}

} // namespace

TEST_CASE("saturated linear law clips just inside the boundary") {
    const Controller c = saturated_linear(gain2(-5.0, -3.0), 1.0);

    const double u_sat = c.eval(state2(0.0, 1.0))(0); // raw value -3, saturated
    CHECK(u_sat == doctest::Approx(-saturation_limit()));
    CHECK(std::abs(u_sat) < 1.0);

    CHECK(c.eval(state2(0.0, 0.0))(0) == 0.0);

    const Controller mild = saturated_linear(gain2(-1.0, -1.0), 1.0);
    CHECK(mild.eval(state2(0.4, 0.4))(0) == doctest::Approx(-0.8));
    const Matrix j = mild.jacobian(state2(0.4, 0.4));
    CHECK(j(0, 0) == -1.0);
    CHECK(j(0, 1) == -1.0);

    // saturated region: one-sided zero Jacobian
    CHECK(c.jacobian(state2(0.0, 1.0)).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(saturated_linear(gain2(1, 1), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(saturated_linear(gain2(1, 1), 1.5), std::invalid_argument);
}

TEST_CASE("feature_tanh: zero weights, strict bounds, argmin agreement") {
    const PlantModel plant = make_oscillator_plant();
    const LossModel loss = make_oscillator_loss();
    const FeatureBasis basis = monomial_basis(6);

    const Controller zero = feature_tanh(RowVec::Zero(basis.nf), basis, plant, 1.0);
    CHECK(zero.eval(state2(0.7, -0.3))(0) == 0.0);

    SeededRng rng(11);
    RowVec w(basis.nf);
    for (int i = 0; i < basis.nf; ++i)
        w(i) = rng.uniform(-2.0, 2.0);
    const Controller c = feature_tanh(w, basis, plant, 1.0);

    for (int i = 0; i < 100; ++i) {
        const StateVec x = state2(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
        const double u = c.eval(x)(0);
        CHECK(std::abs(u) < 1.0);
        // definitionally the minimizer under the learned gradient
        const RowVec p = w * basis.jacobian(x) * plant.input_matrix(x);
        CHECK(u == doctest::Approx(loss.argmin_command(p)(0)).epsilon(1e-12));
    }

    CHECK_THROWS_AS(feature_tanh(RowVec::Zero(3), basis, plant, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(feature_tanh(w, basis, plant, 0.0), std::invalid_argument);
}

TEST_CASE("feature controllers match the improved law from the loss") {
    const PlantModel plant = make_integrator_plant();
    const LossModel loss = make_integrator_loss(100.0, 1.0);
    const FeatureBasis basis = monomial_basis(4);
    SeededRng rng(13);
    RowVec w(basis.nf);
    for (int i = 0; i < basis.nf; ++i)
        w(i) = rng.uniform(-1.0, 1.0);

    const Controller direct = feature_tanh(w, basis, plant, loss.command_weight);
    const Controller routed = improved_controller(w, basis, plant, loss);
    for (int i = 0; i < 50; ++i) {
        const StateVec x = state2(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
        CHECK(direct.eval(x)(0) == doctest::Approx(routed.eval(x)(0)).epsilon(1e-15));
    }
}

TEST_CASE("feature_linear 1-D analytic check: theta = x^2 gives u = -2 c x G") {
    PlantModel plant;
    plant.nx = 1;
    plant.nu = 1;
    plant.drift = [](const StateVec& x) { return StateVec(-x); };
    plant.input_matrix = [](const StateVec&) { return Matrix(2.0 * Matrix::Ones(1, 1)); };
    plant.drift_jacobian = [](const StateVec&) { return Matrix(-Matrix::Ones(1, 1)); };
    plant.input_jacobian_contraction = [](const StateVec&, const Command&) {
        return Matrix(Matrix::Zero(1, 1));
    };

    FeatureBasis basis;
    basis.nf = 1;
    basis.nx = 1;
    basis.eval = [](const StateVec& x) {
        Vector v(1);
        v(0) = x(0) * x(0);
        return v;
    };
    basis.jacobian = [](const StateVec& x) { return Matrix(2.0 * x(0) * Matrix::Ones(1, 1)); };
    basis.hessian_contraction = [](const StateVec&, const StateVec& g) {
        return Matrix(2.0 * g(0) * Matrix::Ones(1, 1));
    };
    basis.g_hessian_contraction = [h = basis.hessian_contraction](const StateVec& x,
                                                                  const PlantModel& p) {
        return h(x, StateVec(p.input_matrix(x).col(0)));
    };

    RowVec w(1);
    w << 0.7;
    const Controller c = feature_linear(w, basis, plant);
    for (double x0 : {-1.0, -0.3, 0.2, 1.5}) {
        StateVec x(1);
        x << x0;
        CHECK(c.eval(x)(0) == doctest::Approx(-2.0 * 0.7 * x0 * 2.0));
        CHECK(c.jacobian(x)(0, 0) == doctest::Approx(-2.0 * 0.7 * 2.0));
    }
}

TEST_CASE("controller Jacobians match finite differences away from kinks") {
    const PlantModel plant = make_oscillator_plant();
    const FeatureBasis basis = monomial_basis(6);
    SeededRng rng(17);
    RowVec w(basis.nf);
    for (int i = 0; i < basis.nf; ++i)
        w(i) = rng.uniform(-1.0, 1.0);

    const Controller cs[3] = {saturated_linear(gain2(-5.0, -3.0), 1.0),
                              feature_tanh(w, basis, plant, 1.0), feature_linear(w, basis, plant)};
    for (const Controller& c : cs) {
        int tested = 0;
        while (tested < 100) {
            const StateVec x = state2(rng.uniform(-1, 1), rng.uniform(-1, 1));
            if (c.kind == ControllerKind::saturated_linear &&
                std::abs(std::abs(-5.0 * x(0) - 3.0 * x(1)) - 1.0) < 1e-3)
                continue;
            CHECK(relative_error(finite_difference_jacobian(c.eval, x), c.jacobian(x)) < 1e-5);
            ++tested;
        }
    }
}
