#include "pmme/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pmme {

double hermite(int m, double x) {
    const double x2 = x * x;
    switch (m) {
    case 0: return 1.0;
    case 1: return x;
    case 2: return x2 - 1.0;
    case 3: return x * (x2 - 3.0);
    case 4: return x2 * (x2 - 6.0) + 3.0;
    case 5: return x * (x2 * (x2 - 10.0) + 15.0);
    case 6: return x2 * (x2 * (x2 - 15.0) + 45.0) - 15.0;
    default: throw ArgumentError("hermite: supported orders are 0..6");
    }
}

ExpansionCoefficients expansion_coefficients(const PsiCoefficients& psi, const AmCoefficients& am) {
    if (!(psi.psi1 > 0.0)) throw ArgumentError("expansion_coefficients: psi1 must be > 0");
    if (!(am.a2 > 0.0)) throw ArgumentError("expansion_coefficients: a2 must be > 0");
    ExpansionCoefficients c;
    c.theta0 = psi.theta0;
    c.psi = psi;
    c.am = am;
    const double root_a2 = std::sqrt(am.a2);
    c.b2 = psi.psi2 * root_a2 / psi.psi1;
    c.b3 = psi.psi3 * am.a2 / psi.psi1;
    const double ah3 = am.ahat3;
    const double ah4 = am.ahat4;
    c.B1 = c.b2;
    c.B2 = c.b2 * ah3 + 1.5 * c.b2 * c.b2 + 3.0 * c.b3;
    c.B3 = ah3 / 6.0 + c.b2;
    c.B4 = ah4 / 24.0 + (7.0 / 6.0) * c.b2 * ah3 + c.b3 + 3.0 * c.b2 * c.b2;
    c.B6 = ah3 * ah3 / 72.0 + c.b2 * ah3 / 6.0 + 0.5 * c.b2 * c.b2;
    c.K = 1.0 / (psi.psi1 * root_a2);
    return c;
}

ExpansionCoefficients expansion_coefficients(const InverseMap& inv, double theta0, int k) {
    return expansion_coefficients(psi_coefficients(inv, theta0, k), am_coefficients(inv.map(), theta0));
}

double stochastic_expansion_eval(const ExpansionCoefficients& c, double eta, int n, int k) {
    if (k < 1 || k > 3) throw ArgumentError("stochastic_expansion_eval: k must be in 1..3");
    if (n < 1) throw ArgumentError("stochastic_expansion_eval: n must be >= 1");
    const double eps = 1.0 / std::sqrt(static_cast<double>(n));
    const double psi[3] = {c.psi.psi1, c.psi.psi2, c.psi.psi3};
    double sum = 0.0;
    double term = 1.0;
    for (int l = 0; l < k; ++l) {
        term *= eta * eps;
        sum += psi[l] * term;
    }
    return sum;
}

double second_moment_bracket(const ExpansionCoefficients& c) {
    const auto& p = c.psi;
    const auto& a = c.am;
    return 2.0 * p.psi2 * a.a3 / (p.psi1 * a.a2) + 3.0 * p.psi2 * p.psi2 * a.a2 / (p.psi1 * p.psi1) +
           6.0 * p.psi3 * a.a2 / p.psi1;
}

double predicted_second_moment(const ExpansionCoefficients& c, int n) {
    if (n < 1) throw ArgumentError("predicted_second_moment: n must be >= 1");
    const double limit = c.psi.psi1 * c.psi.psi1 * c.am.a2;
    return limit * (1.0 + second_moment_bracket(c) / n);
}

double predicted_mean_bias(const ExpansionCoefficients& c, int n) {
    if (n < 1) throw ArgumentError("predicted_mean_bias: n must be >= 1");
    return c.psi.psi2 * c.am.a2 / n;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace {

void check_order(int n, int order) {
    if (n < 1) throw ArgumentError("edgeworth: n must be >= 1");
    if (order != 1 && order != 2) throw ArgumentError("edgeworth: order must be 1 or 2");
}

} // namespace

double edgeworth_cdf(const ExpansionCoefficients& c, double x, int n, int order) {
    check_order(n, order);
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    // integral_{-inf}^x He_m(y) f(y) dy = -He_{m-1}(x) f(x)
    const double f = normal_pdf(x);
    const double eps = 1.0 / std::sqrt(static_cast<double>(n));
    double value = normal_cdf(x) - eps * (c.B1 * hermite(0, x) + c.B3 * hermite(2, x)) * f;
    if (order == 2) {
        value -= eps * eps * (c.B2 * hermite(1, x) + c.B4 * hermite(3, x) + c.B6 * hermite(5, x)) * f;
    }
    return value;
}

double edgeworth_cdf_clipped(const ExpansionCoefficients& c, double x, int n, int order) {
    return std::clamp(edgeworth_cdf(c, x, n, order), 0.0, 1.0);
}

double edgeworth_density(const ExpansionCoefficients& c, double x, int n, int order) {
    check_order(n, order);
    if (std::isinf(x)) return 0.0;
    const double f = normal_pdf(x);
    const double eps = 1.0 / std::sqrt(static_cast<double>(n));
    double value = f + eps * (c.B1 * hermite(1, x) + c.B3 * hermite(3, x)) * f;
    if (order == 2) {
        value += eps * eps * (c.B2 * hermite(2, x) + c.B4 * hermite(4, x) + c.B6 * hermite(6, x)) * f;
    }
    return value;
}

double normalized_error(const ExpansionCoefficients& c, double theta_hat, double theta0, int n) {
    return std::sqrt(static_cast<double>(n)) * (theta_hat - theta0) / (c.psi.psi1 * std::sqrt(c.am.a2));
}

} // namespace pmme
