#include "helpers.hpp"

#include <doctest.h>

using namespace pmme;
using namespace pmme::test;

TEST_CASE("inversion of the builtin models") {
    Fixture sine("periodic_sine");
    CHECK(std::abs(sine.inv.invert(std::sin(kPi / 3.0)) - kPi / 3.0) < 1e-11);
    CHECK(std::abs(sine.inv.invert(0.5) - kPi / 6.0) < 1e-11);

    Fixture flat("amplitude", {{"h_mod", 0.0}, {"g_is_h", 0.0}});
    CHECK(std::abs(flat.inv.invert(5.0) - 3.0) < 1e-11);
}

TEST_CASE("inversion does not clamp") {
    Fixture sine("periodic_sine");
    CHECK_THROWS_AS((void)sine.inv.invert(1.0), OutOfRangeError);
    CHECK_THROWS_AS((void)sine.inv.invert(-0.2), OutOfRangeError);
    CHECK(sine.inv.invert(sine.inv.range().hi) == 1.5);
}

TEST_CASE("round trip G(m(theta)) = theta on a 101-point grid") {
    for (const char* name : {"amplitude", "exp_decay", "gaussian", "periodic_sine"}) {
        Fixture f(name);
        const auto& th = f.mw.model->theta_interval();
        double previous = -INFINITY;
        for (int i = 0; i <= 100; ++i) {
            const double theta = th.lo + th.length() * i / 100.0;
            const double back = f.inv.invert(f.map().m(theta));
            INFO(std::string(name) << " theta " << theta);
            CHECK(std::abs(back - theta) <= 1e-9);
            CHECK(back > previous);
            previous = back;
        }
    }
}

TEST_CASE("inverse derivatives at pi/3") {
    Fixture sine("periodic_sine");
    const auto d = inverse_derivatives(sine.inv, kPi / 3.0);
    CHECK(rel_err(d.d1, 2.0) < 1e-12);
    CHECK(rel_err(d.d2, 4.0 * std::sqrt(3.0)) < 1e-12);
    CHECK(rel_err(d.d3, 80.0) < 1e-12);
    const auto psi = psi_coefficients(sine.inv, kPi / 3.0);
    CHECK(rel_err(psi.psi1, 2.0) < 1e-12);
    CHECK(rel_err(psi.psi2, 2.0 * std::sqrt(3.0)) < 1e-12);
    CHECK(rel_err(psi.psi3, 40.0 / 3.0) < 1e-12);
    const auto at_pi6 = psi_coefficients(sine.inv, kPi / 6.0);
    CHECK(rel_err(at_pi6.psi2, 2.0 / (3.0 * std::sqrt(3.0))) < 1e-12);
}

TEST_CASE("linear map has vanishing higher psi") {
    Fixture amp("amplitude");
    const auto psi = psi_coefficients(amp.inv, 2.0);
    CHECK(psi.psi1 > 0.0);
    CHECK(std::abs(psi.psi2) < 1e-14);
    CHECK(std::abs(psi.psi3) < 1e-14);
}

TEST_CASE("psi1 is positive after orientation") {
    Fixture decay("exp_decay");
    CHECK(psi_coefficients(decay.inv, 1.5).psi1 > 0.0);
}

TEST_CASE("closed-form derivatives agree with finite differences of the inverse") {
    for (const char* name : {"amplitude", "exp_decay", "gaussian", "periodic_sine"}) {
        const auto mw = builtin_model(name);
        MomentMapOptions options;
        options.quadrature_tol = 1e-13;
        const InverseMap inv(moment_map(mw.model, mw.weight, options), 1e-15);
        const auto& th = mw.model->theta_interval();
        const double span = inv.range().hi - inv.range().lo;
        for (double s : {0.3, 0.5, 0.7}) {
            const double theta = th.lo + s * th.length();
            const double y = inv.map().m(theta);
            const double h = 2e-3 * span;
            auto G = [&](int j) { return inv.invert(y + j * h); };
            const double g1 = (-G(2) + 8 * G(1) - 8 * G(-1) + G(-2)) / (12 * h);
            const double g2 = (-G(2) + 16 * G(1) - 30 * G(0) + 16 * G(-1) - G(-2)) / (12 * h * h);
            const double g3 = (-G(3) + 8 * G(2) - 13 * G(1) + 13 * G(-1) - 8 * G(-2) + G(-3)) / (8 * h * h * h);
            const auto d = inverse_derivatives(inv, theta);
            INFO(std::string(name) << " theta " << theta);
            CHECK(rel_err(d.d1, g1) < 1e-5);
            if (std::abs(d.d2) > 1e-12 * std::abs(d.d1)) {
                CHECK(rel_err(d.d2, g2) < 1e-5);
                CHECK(rel_err(d.d3, g3) < 1e-5);
            } else {
                CHECK(std::abs(g2) < 1e-3 * std::abs(d.d1) / span);
            }
        }
    }
}

TEST_CASE("fourth derivative of G") {
    // G = arcsin: G'''' (y) = 3 y (2 y^2 + 3) / (1 - y^2)^{7/2}
    Fixture sine("periodic_sine");
    for (double theta : {0.4, 0.8, 1.1}) {
        const double y = std::sin(theta);
        const double exact = 3.0 * y * (2.0 * y * y + 3.0) / std::pow(1.0 - y * y, 3.5);
        CHECK(rel_err(sine.inv.derivative_at(theta, 4), exact) < 1e-6);
    }
    const double sup = sine.inv.sup_abs_derivative(4, kPi / 3.0, 0.3);
    const double y = std::sin(kPi / 3.0 + 0.3);
    CHECK(rel_err(sup, 3.0 * y * (2.0 * y * y + 3.0) / std::pow(1.0 - y * y, 3.5)) < 1e-6);
}

TEST_CASE("singular map error where m' vanishes") {
    const double c = 1.00123;
    IntensityModelSpec spec;
    spec.label = "cubic";
    spec.lambda = [c](double theta, double) { return (theta - c) * (theta - c) * (theta - c) + 2.0; };
    spec.lambda_derivative = [c](double theta, double, int order) {
        switch (order) {
        case 1: return 3.0 * (theta - c) * (theta - c);
        case 2: return 6.0 * (theta - c);
        case 3: return 6.0;
        default: return 0.0;
        }
    };
    spec.theta_interval = {0.0, 2.0};
    spec.declared_window = {0.0, 1.0};
    auto model = std::make_shared<const IntensityModel>(spec);
    InverseMap inv(moment_map(model, WeightFunction{[](double) { return 1.0; }, "1"}));
    CHECK_THROWS_AS((void)inverse_derivatives(inv, c), SingularMapError);
    CHECK_THROWS_AS((void)psi_coefficients(inv, c), SingularMapError);
    CHECK_NOTHROW((void)psi_coefficients(inv, 0.5));
}
