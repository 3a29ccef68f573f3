#include "pmme/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pmme {

SamplingMethod parse_sampling_method(const std::string& name) {
    if (name == "thinning") return SamplingMethod::thinning;
    if (name == "inversion") return SamplingMethod::inversion;
    throw ConfigurationError("unknown sampling method '" + name + "' (expected thinning or inversion)");
}

std::string to_string(SamplingMethod method) {
    return method == SamplingMethod::thinning ? "thinning" : "inversion";
}

// ---------------------------------------------------------------------------

CumulativeIntensity::CumulativeIntensity(ModelPtr model, double theta, int segments, double tol)
    : model_(std::move(model)), theta_(theta), tol_(tol) {
    if (segments < 1) throw ConfigurationError("cumulative intensity: need at least one segment");
    const auto& w = model_->window();
    lo_ = w.lo;
    step_ = w.length() / segments;
    nodes_.resize(static_cast<std::size_t>(segments) + 1, 0.0);
    for (int i = 0; i < segments; ++i) {
        const double a = lo_ + step_ * i;
        const double b = (i + 1 == segments) ? w.hi : lo_ + step_ * (i + 1);
        nodes_[static_cast<std::size_t>(i) + 1] =
            nodes_[static_cast<std::size_t>(i)] +
            integral([&](double t) { return model_->lambda(theta_, t); }, {a, b}, tol_ / segments);
    }
}

double CumulativeIntensity::operator()(double t) const {
    const auto& w = model_->window();
    t = std::clamp(t, w.lo, w.hi);
    const auto segments = static_cast<int>(nodes_.size()) - 1;
    const int i = std::min(segments - 1, static_cast<int>((t - lo_) / step_));
    const double a = lo_ + step_ * i;
    return nodes_[static_cast<std::size_t>(i)] +
           integral([&](double s) { return model_->lambda(theta_, s); }, {a, t}, tol_ / segments);
}

double CumulativeIntensity::inverse(double level) const {
    const auto& w = model_->window();
    if (level <= 0.0) return w.lo;
    if (level >= total()) return w.hi;
    const auto upper = std::upper_bound(nodes_.begin(), nodes_.end(), level);
    const auto i = static_cast<int>(std::distance(nodes_.begin(), upper)) - 1;
    const auto segments = static_cast<int>(nodes_.size()) - 1;
    double lo = lo_ + step_ * i;
    double hi = (i + 1 >= segments) ? w.hi : lo_ + step_ * (i + 1);
    const double base = nodes_[static_cast<std::size_t>(i)];
    const double seg_start = lo;
    const double tol = 1e-13 * std::max(1.0, level);

    double t = lo + (hi - lo) * (level - base) /
                        std::max(nodes_[static_cast<std::size_t>(i) + 1] - base, 1e-300);
    for (int iter = 0; iter < 200; ++iter) {
        const double f = base +
                         integral([&](double s) { return model_->lambda(theta_, s); }, {seg_start, t},
                                  tol_ / segments) -
                         level;
        if (std::abs(f) <= tol) break;
        if (f < 0.0) {
            lo = t;
        } else {
            hi = t;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) break;
        const double rate = model_->lambda(theta_, t);
        const double newton = rate > 0.0 ? t - f / rate : lo - 1.0;
        t = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
    }
    return t;
}

// ---------------------------------------------------------------------------

PathSampler::PathSampler(ModelPtr model, double theta, SamplingMethod method)
    : model_(std::move(model)), theta_(theta), method_(method) {
    if (!model_) throw ArgumentError("path sampler: null model");
    const auto& th = model_->theta_interval();
    if (!(theta >= th.lo && theta <= th.hi)) {
        std::ostringstream os;
        os << "path sampler: theta = " << theta << " outside [" << th.lo << ", " << th.hi << "]";
        throw ArgumentError(os.str());
    }
    if (method_ == SamplingMethod::thinning) {
        bound_ = model_->lambda_max(theta_);
        if (!std::isfinite(bound_) || bound_ < 0.0) {
            throw BoundViolationError("path sampler: lambda_max is not a finite nonnegative bound");
        }
    } else {
        cumulative_ = std::make_shared<const CumulativeIntensity>(model_, theta_);
    }
}

void PathSampler::bound_violation(double t, double value) const {
    std::ostringstream os;
    os << "thinning: lambda(" << theta_ << ", " << t << ") = " << value << " exceeds lambda_max = " << bound_
       << " for model '" << model_->label() << "'";
    throw BoundViolationError(os.str());
}

EventPath PathSampler::sample(StreamKey key) const {
    EventPath path;
    path.theta_used = theta_;
    path.seed = key;
    generate(key, [&](double t) { path.times.push_back(t); });
    return path;
}

EventPath sample_path(ModelPtr model, double theta, StreamKey seed, SamplingMethod method) {
    return PathSampler(std::move(model), theta, method).sample(seed);
}

double stochastic_integral(const WeightFunction& g, const EventPath& path) {
    double sum = 0.0;
    for (double t : path.times) sum += g(t);
    return sum;
}

// ---------------------------------------------------------------------------

BatchSampler::BatchSampler(const MomentMap& map, double theta0, SamplingMethod method)
    : map_(map), theta0_(theta0), m0_(map.m(theta0)), sampler_(map.model_ptr(), theta0, method) {}

SampleBatch BatchSampler::sample(int n, BatchSeed seed) const {
    if (n < 1) throw ArgumentError("sample_batch: n must be >= 1");
    SampleBatch batch;
    batch.n = n;
    batch.theta0 = theta0_;
    batch.counts.reserve(static_cast<std::size_t>(n));
    batch.integrals.reserve(static_cast<std::size_t>(n));
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        int count = 0;
        double integral_j = 0.0;
        sampler_.generate({seed.master, seed.replication, static_cast<std::uint32_t>(j)}, [&](double t) {
            ++count;
            integral_j += map_.weight(t);
        });
        batch.counts.push_back(count);
        batch.integrals.push_back(integral_j);
        total += integral_j;
    }
    batch.mbar = total / n;
    batch.eta = std::sqrt(static_cast<double>(n)) * (batch.mbar - m0_);
    return batch;
}

double BatchSampler::statistic(int n, BatchSeed seed) const {
    if (n < 1) throw ArgumentError("sample_batch: n must be >= 1");
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        double integral_j = 0.0;
        sampler_.generate({seed.master, seed.replication, static_cast<std::uint32_t>(j)},
                          [&](double t) { integral_j += map_.weight(t); });
        total += integral_j;
    }
    return total / n;
}

SampleBatch sample_batch(const MomentMap& map, double theta0, int n, BatchSeed seed, SamplingMethod method) {
    return BatchSampler(map, theta0, method).sample(n, seed);
}

} // namespace pmme
