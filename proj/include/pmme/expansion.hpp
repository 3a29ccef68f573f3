#pragma once

#include "pmme/inverse.hpp"
#include "pmme/moments.hpp"

namespace pmme {

/// Coefficients of the stochastic, moment and distribution-function
/// expansions at a fixed theta0.
struct ExpansionCoefficients {
    double theta0{0.0};
    PsiCoefficients psi;
    AmCoefficients am;
    double b2{0.0}; // psi2 sqrt(a2) / psi1
    double b3{0.0}; // psi3 a2 / psi1
    double B1{0.0};
    double B2{0.0};
    double B3{0.0};
    double B4{0.0};
    double B6{0.0};
    double K{0.0};  // (psi1 sqrt(a2))^{-1}
};

/// Probabilists' Hermite polynomial He_m(x) for m in 0..6.
[[nodiscard]] double hermite(int m, double x);

[[nodiscard]] ExpansionCoefficients expansion_coefficients(const PsiCoefficients& psi, const AmCoefficients& am);

/// Full pipeline: quadrature -> moment map -> inverse -> coefficients.
[[nodiscard]] ExpansionCoefficients expansion_coefficients(const InverseMap& inv, double theta0, int k = 3);

/// Main term sum_{l<=k} psi_l eta^l n^{-l/2} of the stochastic expansion.
[[nodiscard]] double stochastic_expansion_eval(const ExpansionCoefficients& c, double eta, int n, int k);

/// Coefficient of 1/n in n E(theta_hat - theta0)^2 / (psi1^2 a2):
/// 2 psi2 a3 / (psi1 a2) + 3 psi2^2 a2 / psi1^2 + 6 psi3 a2 / psi1.
[[nodiscard]] double second_moment_bracket(const ExpansionCoefficients& c);

/// n E(theta_hat - theta0)^2 ~ psi1^2 a2 (1 + bracket / n).
[[nodiscard]] double predicted_second_moment(const ExpansionCoefficients& c, int n);

/// E theta_hat - theta0 ~ psi2 a2 / n.
[[nodiscard]] double predicted_mean_bias(const ExpansionCoefficients& c, int n);

[[nodiscard]] double normal_pdf(double x);
[[nodiscard]] double normal_cdf(double x);

/// Edgeworth approximation of P(normalized error < x), order 1 or 2. Not
/// clipped: the value may leave [0, 1] in the tails.
[[nodiscard]] double edgeworth_cdf(const ExpansionCoefficients& c, double x, int n, int order);
/// Same, clipped to [0, 1] for presentation.
[[nodiscard]] double edgeworth_cdf_clipped(const ExpansionCoefficients& c, double x, int n, int order);
/// Density of the approximation; may be negative far in the tails.
[[nodiscard]] double edgeworth_density(const ExpansionCoefficients& c, double x, int n, int order);

/// sqrt(n) (theta_hat - theta0) / (psi1 sqrt(a2)).
[[nodiscard]] double normalized_error(const ExpansionCoefficients& c, double theta_hat, double theta0, int n);

} // namespace pmme
