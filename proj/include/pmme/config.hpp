#pragma once

#include "pmme/intensity.hpp"
#include "pmme/simulate.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pmme {

inline constexpr int kConfigSchemaVersion = 1;

/// A model written as expressions in `t` and `theta` (see Expression).
struct UserModelSpec {
    std::string label{"user"};
    std::string lambda;
    std::string g;
    Interval window;                  // may be infinite when `truncation` is set
    std::optional<Interval> truncation;
    Interval theta_interval;
    std::string lambda_max;           // expression in theta; empty: grid bound

    friend bool operator==(const UserModelSpec&, const UserModelSpec&) = default;
};

/// `name` is a builtin name or "user".
struct ModelSelection {
    std::string name{"periodic_sine"};
    BuiltinParams params;
    std::optional<UserModelSpec> user;

    friend bool operator==(const ModelSelection&, const ModelSelection&) = default;
};

struct XGrid {
    double lo{-4.0};
    double hi{4.0};
    int points{81};

    [[nodiscard]] std::vector<double> values() const;
    friend bool operator==(const XGrid&, const XGrid&) = default;
};

struct Tolerances {
    double quadrature{kDefaultQuadratureTol};
    double root{1e-12};

    friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

/// One file fully determines a reproducible run.
struct ExperimentConfig {
    int schema_version{kConfigSchemaVersion};
    ModelSelection model;
    std::optional<Interval> theta_interval; // overrides the model's (alpha, beta)
    std::optional<double> theta0;           // default: midpoint of (alpha, beta)
    int n{1000};
    int N{10000};
    std::uint64_t seed{1};
    int k{3};
    std::optional<double> delta;            // default: (beta - alpha) / 4
    XGrid x_grid;
    Tolerances tolerances;
    SamplingMethod sampler{SamplingMethod::thinning};
    int workers{0};                         // 0: hardware concurrency
    std::string output_dir{"out"};

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// periodic_sine at theta0 = pi/3 with n = 1000, N = 10000.
[[nodiscard]] ExperimentConfig example4_config();

/// JSON text <-> config. Unknown keys and wrong types raise ValidationError.
[[nodiscard]] ExperimentConfig parse_config(const std::string& json_text);
[[nodiscard]] ExperimentConfig load_config(const std::string& path);
/// Every field explicit, doubles at round-trip precision.
[[nodiscard]] std::string dump_config(const ExperimentConfig& config);

/// Builds the model/weight pair with the theta-interval override applied.
/// A user model with an infinite window and no truncation raises ValidationError.
[[nodiscard]] ModelAndWeight resolve_model(const ExperimentConfig& config);

} // namespace pmme
