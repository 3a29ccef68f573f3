#pragma once

#include "pmme/conditions.hpp"
#include "pmme/config.hpp"
#include "pmme/estimator.hpp"
#include "pmme/expansion.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace pmme {

/// A config resolved into the objects every replication shares: model,
/// inverse map, expansion coefficients and the batch sampler.
struct Experiment {
    ExperimentConfig config;
    ModelAndWeight model;
    std::shared_ptr<const InverseMap> inverse;
    std::shared_ptr<const BatchSampler> sampler;
    double theta0{0.0};
    double delta{0.0};
    ExpansionCoefficients coefficients;
};

/// Validates n >= 1, N >= 1, k in 1..3, alpha + delta < theta0 < beta - delta,
/// then builds the shared objects. Throws ConfigurationError on violations.
[[nodiscard]] Experiment prepare_experiment(const ExperimentConfig& config);

struct ReplicationRecord {
    double theta_hat{0.0};
    double mbar{0.0};
    double eta{0.0};
    double xi{0.0}; // normalized error
    Clamp clamp{Clamp::none};
};

/// Replications [first, first + count) of the experiment, in index order.
/// Replication r draws its n paths from StreamKey{seed, r, j}.
[[nodiscard]] std::vector<ReplicationRecord> simulate_replications(const Experiment& experiment, std::uint32_t first,
                                                                   std::uint32_t count);

/// All N replications split into static shards over `workers` threads
/// (0: hardware concurrency). The result does not depend on `workers`.
[[nodiscard]] std::vector<ReplicationRecord> simulate_all(const Experiment& experiment, int workers);

/// Mean of a per-replication statistic with its standard error.
struct Estimate {
    double value{0.0};
    double se{0.0};
};

struct CdfRow {
    double x{0.0};
    double empirical{0.0};
    double gaussian{0.0};
    double edgeworth1{0.0};
    double edgeworth2{0.0};
};

struct GoodSetDiagnostics {
    double delta{0.0};
    Estimate b1_violation;  // P(|theta_hat - theta0| >= delta)
    double c_k1{0.0};       // sup |G^{(k+1)}| over [m(theta0 - delta), m(theta0 + delta)]
    double b2_threshold{0.0}; // n^{1/4} (k+1)! / C_{k+1}, compared with |eta|^{k+1}
    Estimate b2_violation;
    double kappa{0.0};      // min |m'| over the theta grid
    double rho_lower{0.0};  // kappa * delta
    double empty_probability{0.0}; // exp(-n Lambda(window)) at theta0
};

struct Predictions {
    double second_moment_limit{0.0};     // psi1^2 a2
    double scaled_second_moment{0.0};    // psi1^2 a2 (1 + bracket / n)
    double mean_bias{0.0};               // psi2 a2 / n
    double eta2{0.0};
    double eta3{0.0};
    double eta4{0.0};
};

struct MonteCarloReport {
    int n{0};
    int N{0};
    std::uint64_t seed{0};
    int k{0};
    double theta0{0.0};
    std::string model;
    std::string sampler;

    ExpansionCoefficients coefficients;
    Predictions predictions;

    Estimate abs_moment1;          // E|theta_hat - theta0|
    Estimate abs_moment2;          // E|theta_hat - theta0|^2
    Estimate scaled_second_moment; // n E(theta_hat - theta0)^2
    Estimate mean_bias;            // E theta_hat - theta0
    Estimate eta1;
    Estimate eta2;
    Estimate eta3;
    Estimate eta4;

    std::vector<CdfRow> cdf;
    double ks_gaussian{0.0};
    double ks_edgeworth1{0.0};
    double ks_edgeworth2{0.0};

    Estimate clamp_lower;
    Estimate clamp_upper;
    GoodSetDiagnostics good_set;

    bool conditions_verified{false};
    std::vector<std::string> condition_failures;
};

/// Mean and standard error (sample standard deviation / sqrt(N)).
[[nodiscard]] Estimate mean_estimate(const std::vector<double>& values);

/// sup |F_N - cdf| over the sample points, checking both one-sided gaps.
/// `sorted` must be nonempty and sorted ascending.
[[nodiscard]] double ks_distance(const std::vector<double>& sorted, const std::function<double(double)>& cdf);

/// Two-sample KS statistic of sorted samples (ties handled).
[[nodiscard]] double ks_two_sample(const std::vector<double>& a, const std::vector<double>& b);

/// Empirical good-set frequencies and the thresholds behind them.
[[nodiscard]] GoodSetDiagnostics good_set_diagnostics(const Experiment& experiment,
                                                      const std::vector<ReplicationRecord>& records, double c_k1);

/// Deterministic reduction of index-ordered records into the report.
[[nodiscard]] MonteCarloReport aggregate(const Experiment& experiment, const std::vector<ReplicationRecord>& records);

/// prepare -> simulate_all -> aggregate. Errors inside a replication are
/// rethrown as ReplicationError naming the index.
[[nodiscard]] MonteCarloReport run_experiment(const ExperimentConfig& config, int workers = -1);

} // namespace pmme
