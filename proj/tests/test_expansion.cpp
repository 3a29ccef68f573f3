#include "pmme/expansion.hpp"
#include "pmme/quadrature.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace pmme;
using namespace pmme::test;

namespace {

const Interval kLine{-14.0, 14.0};

ExpansionCoefficients sine_at_pi_3() {
    static const Fixture f("periodic_sine");
    return expansion_coefficients(f.inv, kPi / 3.0, 3);
}

double factorial(int m) {
    double r = 1.0;
    for (int i = 2; i <= m; ++i) r *= i;
    return r;
}

} // namespace

TEST_CASE("hermite values") {
    CHECK(hermite(0, 3.7) == 1.0);
    CHECK(hermite(2, 0.0) == -1.0);
    CHECK(hermite(3, 1.0) == -2.0);
    CHECK(hermite(6, 0.0) == -15.0);
    CHECK(hermite(5, 1.0) == doctest::Approx(6.0));
}

TEST_CASE("hermite recurrence") {
    for (int i = 0; i <= 80; ++i) {
        const double x = -4.0 + 0.1 * i;
        for (int m = 1; m <= 5; ++m) {
            const double lhs = hermite(m + 1, x);
            const double rhs = x * hermite(m, x) - m * hermite(m - 1, x);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("hermite orthogonality against the normal density") {
    for (int j = 0; j <= 6; ++j) {
        for (int k = 0; k <= 6; ++k) {
            const double v =
                integral([&](double x) { return hermite(j, x) * hermite(k, x) * normal_pdf(x); }, kLine, 1e-13);
            const double want = j == k ? factorial(j) : 0.0;
            INFO("j " << j << " k " << k);
            CHECK(std::abs(v - want) <= 1e-8);
        }
    }
    for (int m : {1, 2, 3, 4, 6}) {
        const double v = integral([&](double x) { return x * x * hermite(m, x) * normal_pdf(x); }, kLine, 1e-13);
        CHECK(std::abs(v - (m == 2 ? 2.0 : 0.0)) <= 1e-8);
    }
}

TEST_CASE("periodic sine coefficients at pi/3") {
    const auto c = sine_at_pi_3();
    CHECK(rel_err(c.B1, 1.5 * std::sqrt(2.0)) < 1e-8);
    CHECK(c.B1 == c.b2);
    CHECK(rel_err(c.b3, 10.0) < 1e-8);
    CHECK(rel_err(c.B3, 37.0 * std::sqrt(2.0) / 24.0) < 1e-8);
    CHECK(rel_err(c.K, 1.0 / (2.0 * std::sqrt(1.5))) < 1e-8);
    CHECK(rel_err(second_moment_bracket(c), 75.0) < 1e-8);
}

TEST_CASE("bracket of the second moment equals 2 B2") {
    std::mt19937_64 rng(7);
    for (const char* name : {"amplitude", "exp_decay", "gaussian", "periodic_sine"}) {
        Fixture f(name);
        const auto& th = f.mw.model->theta_interval();
        std::uniform_real_distribution<double> pick(th.lo + 0.05 * th.length(), th.hi - 0.05 * th.length());
        for (int i = 0; i < 20; ++i) {
            const auto c = expansion_coefficients(f.inv, pick(rng), 3);
            const double bracket = second_moment_bracket(c);
            INFO(std::string(name) << " theta0 " << c.theta0);
            CHECK(std::abs(bracket - 2.0 * c.B2) <= 1e-12 * std::max(1.0, std::abs(bracket)));
        }
    }
}

TEST_CASE("stochastic expansion main term") {
    const auto c = sine_at_pi_3();
    CHECK(stochastic_expansion_eval(c, 0.0, 100, 3) == 0.0);
    CHECK(stochastic_expansion_eval(c, 1.0, 100, 1) == doctest::Approx(0.2).epsilon(1e-9));
    const double want = 0.2 + 2.0 * std::sqrt(3.0) * 0.01 + 40.0 / 3.0 * 0.001;
    CHECK(stochastic_expansion_eval(c, 1.0, 100, 3) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("moment predictions") {
    const auto c = sine_at_pi_3();
    CHECK(predicted_second_moment(c, 1000) == doctest::Approx(6.45).epsilon(1e-9));
    CHECK(predicted_second_moment(c, 1'000'000'000) == doctest::Approx(6.0).epsilon(1e-6));
    CHECK(predicted_mean_bias(c, 1000) == doctest::Approx(3.0 * std::sqrt(3.0) / 1000.0).epsilon(1e-9));

    Fixture sine("periodic_sine");
    const auto c6 = expansion_coefficients(sine.inv, kPi / 6.0, 3);
    CHECK(predicted_mean_bias(c6, 100) == doctest::Approx(1.0 / (100.0 * std::sqrt(3.0))).epsilon(1e-9));

    Fixture amp("amplitude");
    const auto ca = expansion_coefficients(amp.inv, 2.0, 3);
    CHECK(std::abs(predicted_mean_bias(ca, 10)) < 1e-12);
}

TEST_CASE("normalized error") {
    const auto c = sine_at_pi_3();
    CHECK(normalized_error(c, kPi / 3.0, kPi / 3.0, 100) == 0.0);
    const double one = normalized_error(c, kPi / 3.0 + 0.1, kPi / 3.0, 100);
    CHECK(one == doctest::Approx(1.0 / (2.0 * std::sqrt(1.5))).epsilon(1e-9));
    CHECK(normalized_error(c, kPi / 3.0 + 0.2, kPi / 3.0, 100) == doctest::Approx(2.0 * one).epsilon(1e-12));
}

TEST_CASE("edgeworth cdf values") {
    const auto c = sine_at_pi_3();
    CHECK(edgeworth_cdf(c, 0.0, 100, 1) == doctest::Approx(0.50235079).epsilon(1e-7));
    CHECK(std::abs(edgeworth_cdf(c, 40.0, 100, 1) - 1.0) < 1e-15);
    CHECK(std::abs(edgeworth_cdf(c, 40.0, 100, 2) - 1.0) < 1e-15);
    CHECK(edgeworth_density(c, 0.0, 500, 1) == doctest::Approx(normal_pdf(0.0)).epsilon(1e-14));

    // Order-2 minus order-1 is bounded by the second-order correction.
    const int n = 10000;
    double bound = 0.0;
    double gap = 0.0;
    for (int i = 0; i <= 160; ++i) {
        const double x = -4.0 + 0.05 * i;
        const double h1 = hermite(1, x), h3 = hermite(3, x), h5 = hermite(5, x);
        bound = std::max(bound, std::abs(c.B2 * h1 + c.B4 * h3 + c.B6 * h5) * normal_pdf(x));
        gap = std::max(gap, std::abs(edgeworth_cdf(c, x, n, 2) - edgeworth_cdf(c, x, n, 1)));
    }
    CHECK(gap <= bound / n * (1.0 + 1e-12));

    CHECK(edgeworth_cdf_clipped(c, -3.5, 10, 2) >= 0.0);
    CHECK(edgeworth_cdf_clipped(c, 3.5, 10, 2) <= 1.0);
}

TEST_CASE("density integrates to one and has the predicted second moment") {
    const auto c = sine_at_pi_3();
    for (int n : {20, 100, 1000}) {
        for (int order : {1, 2}) {
            const double mass = integral([&](double x) { return edgeworth_density(c, x, n, order); }, kLine, 1e-13);
            CHECK(std::abs(mass - 1.0) <= 1e-8);
        }
        const double second =
            integral([&](double x) { return x * x * edgeworth_density(c, x, n, 2); }, kLine, 1e-13);
        CHECK(std::abs(second - (1.0 + 2.0 * c.B2 / n)) <= 1e-8);
    }
}

TEST_CASE("cdf derivative matches the density") {
    const auto c = sine_at_pi_3();
    const double h = 1e-4;
    for (int n : {50, 1000}) {
        for (int order : {1, 2}) {
            for (int i = 0; i <= 80; ++i) {
                const double x = -4.0 + 0.1 * i;
                const double fd =
                    (edgeworth_cdf(c, x + h, n, order) - edgeworth_cdf(c, x - h, n, order)) / (2.0 * h);
                CHECK(std::abs(fd - edgeworth_density(c, x, n, order)) <= 1e-6);
            }
        }
    }
}

namespace {

bool monotone_on(const ExpansionCoefficients& c, int n, int order, double lo, double hi) {
    double previous = -INFINITY;
    for (double x = lo; x <= hi + 1e-12; x += 0.01) {
        const double v = edgeworth_cdf(c, x, n, order);
        if (v < previous) return false;
        previous = v;
    }
    return true;
}

} // namespace

TEST_CASE("edgeworth cdf is monotone on [-4, 4] for n >= 50 when the corrections are small") {
    for (const char* name : {"amplitude", "gaussian"}) {
        Fixture f(name);
        const auto& th = f.mw.model->theta_interval();
        for (double s : {0.25, 0.5, 0.75}) {
            const auto c = expansion_coefficients(f.inv, th.lo + s * th.length(), 3);
            for (int n : {50, 200, 1000}) {
                INFO(std::string(name) << " theta0 " << c.theta0 << " n " << n);
                CHECK(monotone_on(c, n, 1, -4.0, 4.0));
                CHECK(monotone_on(c, n, 2, -4.0, 4.0));
            }
        }
    }
}

TEST_CASE("edgeworth cdf is monotone where its density is nonnegative") {
    for (const char* name : {"amplitude", "exp_decay", "gaussian", "periodic_sine"}) {
        Fixture f(name);
        const auto& th = f.mw.model->theta_interval();
        const auto c = expansion_coefficients(f.inv, 0.5 * (th.lo + th.hi), 3);
        for (int n : {50, 200, 1000}) {
            for (int order : {1, 2}) {
                // Largest [-r, r] inside [-4, 4] with a nonnegative density.
                double r = 0.0;
                while (r < 4.0 && edgeworth_density(c, r + 0.01, n, order) >= 0.0 &&
                       edgeworth_density(c, -r - 0.01, n, order) >= 0.0) {
                    r += 0.01;
                }
                INFO(std::string(name) << " n " << n << " order " << order << " r " << r);
                CHECK(r > 1.0);
                CHECK(monotone_on(c, n, order, -r, r));
            }
        }

        // Order 1 has density f (1 + p / sqrt(n)); n >= max p^2 makes it monotone on [-4, 4].
        double worst = 0.0;
        for (int i = 0; i <= 800; ++i) {
            const double x = -4.0 + 0.01 * i;
            worst = std::max(worst, std::abs(c.B1 * hermite(1, x) + c.B3 * hermite(3, x)));
        }
        const int n_star = static_cast<int>(std::ceil(worst * worst)) + 1;
        INFO(std::string(name) << " n* " << n_star);
        CHECK(monotone_on(c, n_star, 1, -4.0, 4.0));
    }
}
