#pragma once

#include "pmme/quadrature.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace pmme {

using IntensityFn = std::function<double(double theta, double t)>;
/// k-th partial derivative of the intensity with respect to theta, k >= 1.
using IntensityDerivativeFn = std::function<double(double theta, double t, int order)>;
using RateBoundFn = std::function<double(double theta)>;

/// Everything needed to build an IntensityModel. `declared_window` is the
/// observation interval as stated (it may be infinite); `truncation` is the
/// finite interval actually integrated and simulated over.
struct IntensityModelSpec {
    std::string label;
    IntensityFn lambda;
    Interval theta_interval;
    Interval declared_window;
    std::optional<Interval> truncation;
    RateBoundFn lambda_max;                 // empty: grid maximum times kGridBoundSafety
    IntensityDerivativeFn lambda_derivative; // empty: moments fall back to finite differences
};

/// Safety factor applied to the grid maximum when a model has no analytic bound.
inline constexpr double kGridBoundSafety = 1.05;

/// Parametric intensity lambda(theta, t) on a finite window. Immutable.
class IntensityModel {
public:
    /// Validates the spec: finite window, alpha < beta, nonnegativity and
    /// bound dominance spot-checked on a theta x t grid.
    explicit IntensityModel(IntensityModelSpec spec);

    [[nodiscard]] double operator()(double theta, double t) const { return spec_.lambda(theta, t); }
    [[nodiscard]] double lambda(double theta, double t) const { return spec_.lambda(theta, t); }
    [[nodiscard]] double lambda_max(double theta) const;
    [[nodiscard]] bool has_analytic_derivative() const noexcept {
        return static_cast<bool>(spec_.lambda_derivative);
    }
    /// Analytic d^k lambda / d theta^k. Precondition: has_analytic_derivative().
    [[nodiscard]] double lambda_derivative(double theta, double t, int order) const;

    [[nodiscard]] const Interval& theta_interval() const noexcept { return spec_.theta_interval; }
    [[nodiscard]] const Interval& window() const noexcept { return window_; }
    [[nodiscard]] const Interval& declared_window() const noexcept { return spec_.declared_window; }
    [[nodiscard]] bool truncated() const noexcept { return !(window_ == spec_.declared_window); }
    [[nodiscard]] const std::string& label() const noexcept { return spec_.label; }

    /// Lambda(window) = integral of lambda(theta, .) over the window.
    [[nodiscard]] double total_intensity(double theta, double tol = kDefaultQuadratureTol) const;

private:
    double grid_bound(double theta) const;

    IntensityModelSpec spec_;
    Interval window_;
};

/// The weight function g(t) defining the moment map.
struct WeightFunction {
    std::function<double(double)> g;
    std::string label;

    [[nodiscard]] double operator()(double t) const { return g(t); }
};

using ModelPtr = std::shared_ptr<const IntensityModel>;

struct ModelAndWeight {
    ModelPtr model;
    WeightFunction weight;
};

/// Numeric parameters of a builtin. Unknown keys are rejected.
using BuiltinParams = std::map<std::string, double>;

enum class Builtin { amplitude, exp_decay, gaussian, periodic_sine };

[[nodiscard]] Builtin parse_builtin(const std::string& name);
[[nodiscard]] std::string to_string(Builtin b);

/// Defaults for a builtin, merged with `overrides` (the full resolved set).
[[nodiscard]] BuiltinParams builtin_defaults(Builtin b);
[[nodiscard]] BuiltinParams resolve_builtin_params(Builtin b, const BuiltinParams& overrides);

/// Catalog of builtin models.
///
///  amplitude      lambda = theta h(t) + lambda0, h(t) = 1 + h_mod cos(2 pi t / tau) on [0, tau];
///                 g = h when g_is_h = 1, else g = 1.
///  exp_decay      lambda = (1 + t^4) exp(-theta t^2) + q0 exp(-t) on [0, inf) truncated at
///                 `truncation` (default 30, dropped mass below 1e-10); g = 2t / (1 + t^4).
///  gaussian       lambda = a exp(-(t - b)^2 / (2 theta^2)) on R truncated at b +- sigmas * beta
///                 (default 12); g = |t - b|^g_power with g_power in {1, 2}.
///  periodic_sine  lambda = 2 sin(2 pi t + theta) + 3 on [0, 1]; g = cos(2 pi t).
[[nodiscard]] ModelAndWeight builtin_model(Builtin b, const BuiltinParams& overrides = {});
[[nodiscard]] ModelAndWeight builtin_model(const std::string& name, const BuiltinParams& overrides = {});

} // namespace pmme
