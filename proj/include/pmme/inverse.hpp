#pragma once

#include "pmme/moments.hpp"

namespace pmme {

struct InverseDerivatives {
    double d1{0.0}; // G'(m(theta0))
    double d2{0.0}; // G''
    double d3{0.0}; // G'''
};

/// psi_l = G^{(l)}(m(theta0)) / l!, the coefficients of the stochastic expansion.
struct PsiCoefficients {
    double theta0{0.0};
    int k{3};
    double psi1{0.0};
    double psi2{0.0};
    double psi3{0.0};
};

inline constexpr double kDefaultRootTol = 1e-12;

/// G = m^{-1} on the range [m(alpha), m(beta)] of the oriented moment map.
class InverseMap {
public:
    explicit InverseMap(MomentMap map, double root_tol = kDefaultRootTol);

    /// Solves m(theta) = y by safeguarded Newton on a bisection bracket.
    /// Throws OutOfRangeError when y is outside range(); never clamps.
    [[nodiscard]] double invert(double y) const;

    /// G', G'', G''' at y = m(theta0) from the identity G(m(theta)) = theta.
    [[nodiscard]] InverseDerivatives derivatives_at(double theta0) const;

    /// G^{(order)}(m(theta)) for order 1..4; order 4 differentiates the
    /// closed-form G''' numerically in theta.
    [[nodiscard]] double derivative_at(double theta, int order) const;

    /// sup |G^{(order)}(y)| for y in [m(theta0 - delta), m(theta0 + delta)],
    /// estimated on a theta-grid of `points` nodes.
    [[nodiscard]] double sup_abs_derivative(int order, double theta0, double delta, int points = 201) const;

    [[nodiscard]] const Interval& range() const noexcept { return range_; }
    [[nodiscard]] const MomentMap& map() const noexcept { return map_; }
    [[nodiscard]] double root_tol() const noexcept { return root_tol_; }

private:
    MomentMap map_;
    double root_tol_;
    Interval range_;
};

/// Threshold below which |m'(theta0)| is treated as zero.
inline constexpr double kSingularSlope = 1e-12;

[[nodiscard]] InverseDerivatives inverse_derivatives(const InverseMap& inv, double theta0);
[[nodiscard]] PsiCoefficients psi_coefficients(const InverseMap& inv, double theta0, int k = 3);

} // namespace pmme
