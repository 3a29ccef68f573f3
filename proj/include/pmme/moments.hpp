#pragma once

#include "pmme/intensity.hpp"

namespace pmme {

struct MomentMapOptions {
    double quadrature_tol{kDefaultQuadratureTol};
    int monotonicity_grid{101};
};

/// m(theta) = integral of g(t) lambda(theta, t) dt over the window, with its
/// theta-derivatives up to order 3.
///
/// A decreasing map is normalized to an increasing one by flipping the sign
/// of g: `m()`, `derivative()` and `weight()` all refer to the oriented
/// weight orientation() * g, while `raw_m()` keeps the user's sign.
/// Derivatives integrate the model's analytic d^k lambda / d theta^k when it
/// has one and a fourth-order central difference of lambda otherwise.
class MomentMap {
public:
    MomentMap(ModelPtr model, WeightFunction weight, MomentMapOptions options = {});

    [[nodiscard]] double m(double theta) const;
    [[nodiscard]] double raw_m(double theta) const { return orientation_ * m(theta); }
    /// order 0..3 of the oriented map.
    [[nodiscard]] double derivative(double theta, int order) const;

    /// Oriented weight: orientation() * g(t).
    [[nodiscard]] double weight(double t) const { return orientation_ * weight_(t); }
    [[nodiscard]] int orientation() const noexcept { return orientation_; }
    [[nodiscard]] bool analytic_derivatives() const noexcept { return model_->has_analytic_derivative(); }

    [[nodiscard]] const IntensityModel& model() const noexcept { return *model_; }
    [[nodiscard]] const ModelPtr& model_ptr() const noexcept { return model_; }
    [[nodiscard]] const WeightFunction& raw_weight() const noexcept { return weight_; }
    [[nodiscard]] double quadrature_tol() const noexcept { return options_.quadrature_tol; }
    [[nodiscard]] const MomentMapOptions& options() const noexcept { return options_; }

    /// Finite-difference step used for the given derivative order at theta.
    [[nodiscard]] static double fd_step(double theta, int order);

private:
    double oriented_integral(double theta, int order) const;

    ModelPtr model_;
    WeightFunction weight_;
    MomentMapOptions options_;
    int orientation_{1};
};

/// integral of g(t) d^order lambda(theta, t) / d theta^order dt for order 0..3,
/// i.e. the order-th derivative of the raw (unoriented) moment map.
[[nodiscard]] double raw_moment_derivative(const IntensityModel& model, const WeightFunction& g, double theta,
                                           int order, double tol = kDefaultQuadratureTol);

/// Builds the map and checks that m' keeps one sign on the monotonicity grid
/// (closed theta interval). Throws NonMonotoneError otherwise.
[[nodiscard]] MomentMap moment_map(ModelPtr model, WeightFunction weight, MomentMapOptions options = {});

struct AmCoefficients {
    double theta0{0.0};
    double a2{0.0};
    double a3{0.0};
    double a4{0.0};
    double ahat3{0.0}; // a3 / a2^{3/2}
    double ahat4{0.0}; // a4 / a2^2
};

/// a_m = integral of g~(t)^m lambda(theta0, t) dt for m = 2, 3, 4, with the
/// oriented weight g~. Throws DegenerateWeightError when a2 <= tolerance.
[[nodiscard]] AmCoefficients am_coefficients(const MomentMap& map, double theta0);

} // namespace pmme
