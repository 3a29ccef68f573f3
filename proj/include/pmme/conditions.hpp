#pragma once

#include "pmme/intensity.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pmme {

struct ConditionGrid {
    int theta_points{21};
    int v_points{400};
    double v_max{50.0};
    /// Constant b in the frequency restriction a2 * b * |v| > 1.
    double cramer_b{1.0};
    std::optional<double> theta0; // default: midpoint of the theta interval
    int k{3};                     // smoothness is probed up to order k + 2
    double smoothness_tol{0.05};
    double quadrature_tol{kDefaultQuadratureTol};
};

/// Numerical proxies for the regularity conditions. Failures are recorded,
/// never thrown, so callers can continue with `all_pass == false`.
struct ConditionReport {
    // Finite moments: sup over the theta grid of integral |g|^m lambda, m = 1..max_m.
    std::vector<double> weight_moments;
    bool moments_pass{true};

    // Monotone map with slope bounded away from zero.
    double kappa{0.0};
    int orientation{0};
    bool monotone_pass{true};

    // Finite-difference derivatives of m, orders 1..k+2: worst relative change
    // between step h and h/2 over the grid.
    std::vector<double> smoothness_change;
    bool smoothness_pass{true};

    // min over the v-grid of integral sin^2(v g) lambda(theta0) dt.
    double cramer_min{0.0};
    double cramer_argmin_v{0.0};
    double cramer_theta0{0.0};
    bool cramer_pass{true};

    std::vector<std::string> failures;
    [[nodiscard]] bool all_pass() const noexcept {
        return moments_pass && monotone_pass && smoothness_pass && cramer_pass;
    }
};

/// Throws ConfigurationError for max_m < 4 or a degenerate grid.
[[nodiscard]] ConditionReport check_conditions(const IntensityModel& model, const WeightFunction& g, int max_m,
                                               const ConditionGrid& grid = {});

} // namespace pmme
