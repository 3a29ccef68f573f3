#include "pmme/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

namespace pmme {

Experiment prepare_experiment(const ExperimentConfig& config) {
    if (config.n < 1) throw ConfigurationError("experiment: n must be >= 1");
    if (config.N < 1) throw ConfigurationError("experiment: N must be >= 1");
    if (config.k < 1 || config.k > 3) throw ConfigurationError("experiment: k must be in 1..3");
    if (!(config.tolerances.quadrature > 0.0) || !(config.tolerances.root > 0.0)) {
        throw ConfigurationError("experiment: tolerances must be positive");
    }
    (void)config.x_grid.values();

    Experiment e;
    e.config = config;
    e.model = resolve_model(config);
    const auto& th = e.model.model->theta_interval();
    e.theta0 = config.theta0.value_or(0.5 * (th.lo + th.hi));
    e.delta = config.delta.value_or(0.25 * th.length());
    if (!(e.delta > 0.0)) throw ConfigurationError("experiment: delta must be > 0");
    if (!(th.lo + e.delta < e.theta0 && e.theta0 < th.hi - e.delta)) {
        std::ostringstream os;
        os << "experiment: theta0 = " << e.theta0 << " must satisfy alpha + delta < theta0 < beta - delta (alpha = "
           << th.lo << ", beta = " << th.hi << ", delta = " << e.delta << ")";
        throw ConfigurationError(os.str());
    }
    MomentMapOptions options;
    options.quadrature_tol = config.tolerances.quadrature;
    auto map = moment_map(e.model.model, e.model.weight, options);
    e.inverse = std::make_shared<const InverseMap>(map, config.tolerances.root);
    e.sampler = std::make_shared<const BatchSampler>(e.inverse->map(), e.theta0, config.sampler);
    e.coefficients = expansion_coefficients(*e.inverse, e.theta0, config.k);
    return e;
}

std::vector<ReplicationRecord> simulate_replications(const Experiment& e, std::uint32_t first, std::uint32_t count) {
    std::vector<ReplicationRecord> records;
    records.reserve(count);
    const int n = e.config.n;
    const double root_n = std::sqrt(static_cast<double>(n));
    const double m0 = e.sampler->m0();
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t r = first + i;
        try {
            const double mbar = e.sampler->statistic(n, {e.config.seed, r});
            const auto est = mme_estimate(*e.inverse, mbar);
            records.push_back({est.theta_hat, mbar, root_n * (mbar - m0),
                               normalized_error(e.coefficients, est.theta_hat, e.theta0, n), est.clamped});
        } catch (const Error& err) {
            std::ostringstream os;
            os << "replication " << r << ": " << err.what();
            throw ReplicationError(os.str(), r, err.kind());
        }
    }
    return records;
}

std::vector<ReplicationRecord> simulate_all(const Experiment& e, int workers) {
    const auto total = static_cast<std::uint32_t>(e.config.N);
    if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = static_cast<int>(std::min<std::uint32_t>(static_cast<std::uint32_t>(workers), total));
    if (workers <= 1) return simulate_replications(e, 0, total);

    const auto shards = static_cast<std::uint32_t>(workers);
    std::vector<std::vector<ReplicationRecord>> parts(shards);
    std::vector<std::exception_ptr> failures(shards);
    std::vector<std::thread> threads;
    threads.reserve(shards);
    for (std::uint32_t s = 0; s < shards; ++s) {
        const std::uint32_t begin = static_cast<std::uint32_t>(std::uint64_t{total} * s / shards);
        const std::uint32_t end = static_cast<std::uint32_t>(std::uint64_t{total} * (s + 1) / shards);
        threads.emplace_back([&, s, begin, end] {
            try {
                parts[s] = simulate_replications(e, begin, end - begin);
            } catch (...) {
                failures[s] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
    std::vector<ReplicationRecord> records;
    records.reserve(total);
    for (auto& part : parts) records.insert(records.end(), part.begin(), part.end());
    return records;
}

Estimate mean_estimate(const std::vector<double>& values) {
    if (values.empty()) throw ArgumentError("mean_estimate: no values");
    const auto count = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / count;
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (count - 1.0) / count)};
}

double ks_distance(const std::vector<double>& sorted, const std::function<double(double)>& cdf) {
    if (sorted.empty()) throw ArgumentError("ks_distance: samples must be nonempty");
    const auto count = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / count - f, f - static_cast<double>(i) / count});
    }
    return d;
}

double ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw ArgumentError("ks_two_sample: samples must be nonempty");
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

} // namespace

GoodSetDiagnostics good_set_diagnostics(const Experiment& e, const std::vector<ReplicationRecord>& records,
                                        double c_k1) {
    if (records.empty()) throw ArgumentError("good_set_diagnostics: no records");
    GoodSetDiagnostics d;
    const int n = e.config.n;
    const int k = e.config.k;
    d.delta = e.delta;
    d.c_k1 = c_k1;
    d.b2_threshold = c_k1 > 0.0 ? std::pow(static_cast<double>(n), 0.25) * factorial(k + 1) / c_k1
                                : std::numeric_limits<double>::infinity();

    std::vector<double> b1(records.size());
    std::vector<double> b2(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        b1[i] = std::abs(records[i].theta_hat - e.theta0) >= e.delta ? 1.0 : 0.0;
        b2[i] = std::pow(std::abs(records[i].eta), k + 1) >= d.b2_threshold ? 1.0 : 0.0;
    }
    d.b1_violation = mean_estimate(b1);
    d.b2_violation = mean_estimate(b2);

    const auto& map = e.inverse->map();
    const auto& th = map.model().theta_interval();
    const int points = map.options().monotonicity_grid;
    d.kappa = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points; ++i) {
        d.kappa = std::min(d.kappa, std::abs(map.derivative(th.lo + th.length() * i / (points - 1), 1)));
    }
    d.rho_lower = d.kappa * e.delta;
    d.empty_probability =
        std::exp(-static_cast<double>(n) * map.model().total_intensity(e.theta0, map.quadrature_tol()));
    return d;
}

MonteCarloReport aggregate(const Experiment& e, const std::vector<ReplicationRecord>& records) {
    if (records.size() != static_cast<std::size_t>(e.config.N)) {
        throw ArgumentError("aggregate: record count does not match N");
    }
    MonteCarloReport rep;
    const int n = e.config.n;
    const auto& c = e.coefficients;
    rep.n = n;
    rep.N = e.config.N;
    rep.seed = e.config.seed;
    rep.k = e.config.k;
    rep.theta0 = e.theta0;
    rep.model = e.model.model->label();
    rep.sampler = to_string(e.config.sampler);
    rep.coefficients = c;

    rep.predictions.second_moment_limit = c.psi.psi1 * c.psi.psi1 * c.am.a2;
    rep.predictions.scaled_second_moment = predicted_second_moment(c, n);
    rep.predictions.mean_bias = predicted_mean_bias(c, n);
    rep.predictions.eta2 = c.am.a2;
    rep.predictions.eta3 = c.am.a3 / std::sqrt(static_cast<double>(n));
    rep.predictions.eta4 = 3.0 * c.am.a2 * c.am.a2 + c.am.a4 / n;

    const std::size_t count = records.size();
    std::vector<double> err(count), abs1(count), sq(count), scaled(count);
    std::vector<double> e1(count), e2(count), e3(count), e4(count);
    std::vector<double> lower(count), upper(count), xi(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto& r = records[i];
        const double d = r.theta_hat - e.theta0;
        err[i] = d;
        abs1[i] = std::abs(d);
        sq[i] = d * d;
        scaled[i] = n * d * d;
        e1[i] = r.eta;
        e2[i] = r.eta * r.eta;
        e3[i] = e2[i] * r.eta;
        e4[i] = e2[i] * e2[i];
        lower[i] = r.clamp == Clamp::lower ? 1.0 : 0.0;
        upper[i] = r.clamp == Clamp::upper ? 1.0 : 0.0;
        xi[i] = r.xi;
    }
    rep.abs_moment1 = mean_estimate(abs1);
    rep.abs_moment2 = mean_estimate(sq);
    rep.scaled_second_moment = mean_estimate(scaled);
    rep.mean_bias = mean_estimate(err);
    rep.eta1 = mean_estimate(e1);
    rep.eta2 = mean_estimate(e2);
    rep.eta3 = mean_estimate(e3);
    rep.eta4 = mean_estimate(e4);
    rep.clamp_lower = mean_estimate(lower);
    rep.clamp_upper = mean_estimate(upper);

    std::sort(xi.begin(), xi.end());
    const auto total = static_cast<double>(count);
    for (double x : e.config.x_grid.values()) {
        const auto below = std::upper_bound(xi.begin(), xi.end(), x) - xi.begin();
        rep.cdf.push_back({x, static_cast<double>(below) / total, normal_cdf(x), edgeworth_cdf(c, x, n, 1),
                           edgeworth_cdf(c, x, n, 2)});
    }
    rep.ks_gaussian = ks_distance(xi, [](double x) { return normal_cdf(x); });
    rep.ks_edgeworth1 = ks_distance(xi, [&](double x) { return edgeworth_cdf(c, x, n, 1); });
    rep.ks_edgeworth2 = ks_distance(xi, [&](double x) { return edgeworth_cdf(c, x, n, 2); });

    const double c_k1 = e.inverse->sup_abs_derivative(e.config.k + 1, e.theta0, e.delta);
    rep.good_set = good_set_diagnostics(e, records, c_k1);

    ConditionGrid grid;
    grid.theta0 = e.theta0;
    grid.k = e.config.k;
    grid.quadrature_tol = e.config.tolerances.quadrature;
    const auto conditions = check_conditions(*e.model.model, e.model.weight, 8, grid);
    rep.conditions_verified = conditions.all_pass();
    rep.condition_failures = conditions.failures;
    return rep;
}

MonteCarloReport run_experiment(const ExperimentConfig& config, int workers) {
    const auto experiment = prepare_experiment(config);
    const auto records = simulate_all(experiment, workers < 0 ? config.workers : workers);
    return aggregate(experiment, records);
}

} // namespace pmme
