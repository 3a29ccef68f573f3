#pragma once

#include "pmme/moments.hpp"
#include "pmme/random.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace pmme {

enum class SamplingMethod { thinning, inversion };

[[nodiscard]] SamplingMethod parse_sampling_method(const std::string& name);
[[nodiscard]] std::string to_string(SamplingMethod method);

/// One realization of the process on the window: strictly increasing times.
struct EventPath {
    std::vector<double> times;
    double theta_used{0.0};
    StreamKey seed{};
};

/// Cumulative intensity t -> integral of lambda(theta, s) ds from the window
/// start, tabulated on a uniform grid and inverted per event by safeguarded
/// Newton (time rescaling).
class CumulativeIntensity {
public:
    CumulativeIntensity(ModelPtr model, double theta, int segments = 64, double tol = kDefaultQuadratureTol);

    [[nodiscard]] double total() const noexcept { return nodes_.back(); }
    [[nodiscard]] double operator()(double t) const;
    /// Smallest t in the window with Lambda(t) = level, level in [0, total()].
    [[nodiscard]] double inverse(double level) const;

private:
    ModelPtr model_;
    double theta_;
    double tol_;
    double lo_;
    double step_;
    std::vector<double> nodes_;
};

/// Event generator bound to (model, theta, method). Caches lambda_max for
/// thinning and the cumulative-intensity table for inversion, so repeated
/// paths at the same theta are cheap. Immutable after construction.
class PathSampler {
public:
    PathSampler(ModelPtr model, double theta, SamplingMethod method);

    /// Calls `on_event(t)` for each event in increasing order; deterministic in `key`.
    template <class OnEvent>
    void generate(StreamKey key, OnEvent&& on_event) const;

    [[nodiscard]] EventPath sample(StreamKey key) const;

    [[nodiscard]] double theta() const noexcept { return theta_; }
    [[nodiscard]] SamplingMethod method() const noexcept { return method_; }
    [[nodiscard]] const IntensityModel& model() const noexcept { return *model_; }

private:
    [[noreturn]] void bound_violation(double t, double value) const;

    ModelPtr model_;
    double theta_;
    SamplingMethod method_;
    double bound_{0.0};
    std::shared_ptr<const CumulativeIntensity> cumulative_;
};

template <class OnEvent>
void PathSampler::generate(StreamKey key, OnEvent&& on_event) const {
    StreamRng rng(key);
    const auto& window = model_->window();
    if (method_ == SamplingMethod::thinning) {
        if (!(bound_ > 0.0)) return;
        double t = window.lo;
        const double rate = bound_;
        while (true) {
            t += rng.exponential() / rate;
            if (t > window.hi) break;
            const double value = model_->lambda(theta_, t);
            if (value > bound_) bound_violation(t, value);
            if (rng.uniform() * bound_ <= value) on_event(t);
        }
    } else {
        const double total = cumulative_->total();
        double level = 0.0;
        double last = -std::numeric_limits<double>::infinity();
        while (true) {
            level += rng.exponential();
            if (level > total) break;
            double t = cumulative_->inverse(level);
            if (t <= last) t = std::nextafter(last, window.hi);
            on_event(t);
            last = t;
        }
    }
}

/// Single path; builds a PathSampler on the fly.
[[nodiscard]] EventPath sample_path(ModelPtr model, double theta, StreamKey seed,
                                    SamplingMethod method = SamplingMethod::thinning);

/// Sum of g over the event times; 0 for an empty path.
[[nodiscard]] double stochastic_integral(const WeightFunction& g, const EventPath& path);

/// Seed of a batch: master seed plus replication index. Path j of the batch
/// draws from StreamKey{master, replication, j}.
struct BatchSeed {
    std::uint64_t master{0};
    std::uint32_t replication{0};
};

struct SampleBatch {
    int n{0};
    double theta0{0.0};
    double mbar{0.0};  // (1/n) sum_j integral of g~ dX_j, oriented weight
    double eta{0.0};   // sqrt(n) (mbar - m(theta0))
    std::vector<int> counts;
    std::vector<double> integrals;
};

/// Batch generator with m(theta0) cached. `statistic()` avoids all
/// per-path allocation and is what the Monte Carlo engine calls.
class BatchSampler {
public:
    BatchSampler(const MomentMap& map, double theta0, SamplingMethod method = SamplingMethod::thinning);

    [[nodiscard]] SampleBatch sample(int n, BatchSeed seed) const;
    /// mbar only.
    [[nodiscard]] double statistic(int n, BatchSeed seed) const;

    [[nodiscard]] double m0() const noexcept { return m0_; }
    [[nodiscard]] const PathSampler& path_sampler() const noexcept { return sampler_; }

private:
    MomentMap map_;
    double theta0_;
    double m0_;
    PathSampler sampler_;
};

[[nodiscard]] SampleBatch sample_batch(const MomentMap& map, double theta0, int n, BatchSeed seed,
                                       SamplingMethod method = SamplingMethod::thinning);

} // namespace pmme
