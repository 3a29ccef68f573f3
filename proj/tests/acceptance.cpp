// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "pmme/cli.hpp"
#include "pmme/config.hpp"
#include "pmme/estimator.hpp"
#include "pmme/expansion.hpp"
#include "pmme/montecarlo.hpp"
#include "pmme/quadrature.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace pmme;

namespace {

constexpr double kPi = std::numbers::pi;
const char* const kBuiltins[] = {"amplitude", "exp_decay", "gaussian", "periodic_sine"};

struct Outcome {
    bool pass{true};
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

Outcome ac1_coefficients() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const auto mw = builtin_model("periodic_sine");
    const InverseMap inv(moment_map(mw.model, mw.weight));
    const auto c = expansion_coefficients(inv, kPi / 3.0, 3);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::pair<const char*, std::pair<double, double>> golden[] = {
        {"a2", {c.am.a2, 1.5}},
        {"a3", {c.am.a3, 3.0 * std::sqrt(3.0) / 8.0}},
        {"psi1", {c.psi.psi1, 2.0}},
        {"psi2", {c.psi.psi2, 2.0 * std::sqrt(3.0)}},
        {"psi3", {c.psi.psi3, 40.0 / 3.0}},
        {"B1", {c.B1, 1.5 * std::sqrt(2.0)}},
    };
    double worst = 0.0;
    for (const auto& [name, v] : golden) {
        const double e = rel_err(v.first, v.second);
        worst = std::max(worst, e);
        o.require(e <= 1e-8, std::string(name) + fmt(" rel err %.3g", e));
    }
    o.require(seconds < 1.0, fmt("pipeline took %.3g s", seconds));
    o.detail = fmt("max rel err %.3g, %.3g s", worst, seconds) + (o.detail.empty() ? "" : "; " + o.detail);
    return o;
}

Outcome ac2_reproduce() {
    Outcome o;
    const auto dir = std::filesystem::temp_directory_path() / "pmme_acceptance_example4";
    std::filesystem::remove_all(dir);
    const std::string out_dir = dir.string();
    const char* argv[] = {"pmme", "reproduce-example4", "--out", out_dir.c_str()};
    std::ostringstream out, err;
    const int status = run_cli(4, argv, out, err);
    if (status != 0) {
        o.require(false, "reproduce-example4 exited with " + std::to_string(status) + ": " + err.str());
        return o;
    }
    std::ifstream in(dir / "report.json");
    const auto j = nlohmann::json::parse(in);
    const double empirical = j["scaled_second_moment"]["value"].get<double>();
    const double se = j["scaled_second_moment"]["se"].get<double>();
    const double predicted = j["predictions"]["scaled_second_moment"].get<double>();
    const double limit = j["predictions"]["second_moment_limit"].get<double>();
    o.require(empirical >= 6.2 && empirical <= 6.8, "empirical value outside [6.2, 6.8]");
    o.detail = fmt("n E(err^2) = %.4f +- %.3f (prediction %.4f, limit %.4f)", empirical, se, predicted, limit) +
               (o.detail.empty() ? "" : "; " + o.detail);
    return o;
}

Outcome ac3_bracket_identity() {
    Outcome o;
    std::mt19937_64 rng(20240601);
    double worst = 0.0;
    for (const char* name : kBuiltins) {
        const auto mw = builtin_model(name);
        const InverseMap inv(moment_map(mw.model, mw.weight));
        const auto& th = mw.model->theta_interval();
        std::uniform_real_distribution<double> pick(th.lo + 0.05 * th.length(), th.hi - 0.05 * th.length());
        for (int i = 0; i < 20; ++i) {
            const auto c = expansion_coefficients(inv, pick(rng), 3);
            const double bracket = second_moment_bracket(c);
            const double gap = std::abs(bracket - 2.0 * c.B2) / std::max(1.0, std::abs(bracket));
            worst = std::max(worst, gap);
            o.require(gap <= 1e-12, std::string(name) + fmt(" at theta0 = %.6g: gap %.3g", c.theta0, gap));
        }
    }
    o.detail = fmt("max |bracket - 2 B2| (relative) %.3g over 80 cases", worst) +
               (o.detail.empty() ? "" : "; " + o.detail);
    return o;
}

Outcome ac4_eta_moments() {
    Outcome o;
    auto config = example4_config();
    config.n = 100;
    config.N = 100000;
    const auto r = run_experiment(config);
    const std::pair<const char*, std::pair<Estimate, double>> checks[] = {
        {"E eta^2", {r.eta2, 1.5}},
        {"E eta^3", {r.eta3, 0.064952}},
        {"E eta^4", {r.eta4, 6.76125}},
    };
    for (const auto& [name, v] : checks) {
        const auto& [est, target] = v;
        const double z = (est.value - target) / est.se;
        o.detail += (o.detail.empty() ? "" : ", ") + std::string(name) +
                    fmt(" = %.5f +- %.5f vs %.6g (z = %.2f)", est.value, est.se, target, z);
        if (std::abs(z) > 3.0) {
            o.pass = false;
            o.detail += " OUT";
        }
    }
    return o;
}

Outcome ac5_edgeworth_improvement() {
    Outcome o;
    for (int n : {100, 500}) {
        auto config = example4_config();
        config.n = n;
        config.N = 50000;
        const auto r = run_experiment(config);
        o.detail += (o.detail.empty() ? "" : "; ") +
                    fmt("n = %.0f: KS normal %.5f, order 1 %.5f, order 2 %.5f", n, r.ks_gaussian,
                        r.ks_edgeworth1, r.ks_edgeworth2);
        if (!(r.ks_edgeworth1 < r.ks_gaussian)) {
            o.pass = false;
            o.detail += " NOT IMPROVED";
        }
    }
    return o;
}

double factorial(int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

bool same_bits(const std::vector<ReplicationRecord>& a, const std::vector<ReplicationRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::memcmp(&a[i].theta_hat, &b[i].theta_hat, sizeof(double)) != 0 ||
            std::memcmp(&a[i].mbar, &b[i].mbar, sizeof(double)) != 0 ||
            std::memcmp(&a[i].xi, &b[i].xi, sizeof(double)) != 0 || a[i].clamp != b[i].clamp) {
            return false;
        }
    }
    return true;
}

Outcome ac6_properties() {
    Outcome o;
    const Interval line{-14.0, 14.0};

    // Hermite recurrence and orthogonality.
    double hermite_gap = 0.0;
    for (int i = 0; i <= 80; ++i) {
        const double x = -4.0 + 0.1 * i;
        for (int m = 1; m <= 5; ++m) {
            const double lhs = hermite(m + 1, x);
            hermite_gap = std::max(hermite_gap, std::abs(lhs - (x * hermite(m, x) - m * hermite(m - 1, x))) /
                                                    std::max(1.0, std::abs(lhs)));
        }
    }
    for (int j = 0; j <= 6; ++j) {
        for (int k = 0; k <= 6; ++k) {
            const double v =
                integral([&](double x) { return hermite(j, x) * hermite(k, x) * normal_pdf(x); }, line, 1e-13);
            hermite_gap = std::max(hermite_gap, std::abs(v - (j == k ? factorial(j) : 0.0)));
        }
    }
    for (int m : {1, 2, 3, 4, 6}) {
        const double v = integral([&](double x) { return x * x * hermite(m, x) * normal_pdf(x); }, line, 1e-13);
        hermite_gap = std::max(hermite_gap, std::abs(v - (m == 2 ? 2.0 : 0.0)));
    }
    o.require(hermite_gap <= 1e-8, fmt("hermite gap %.3g", hermite_gap));

    // Density mass and second moment.
    const auto sine = builtin_model("periodic_sine");
    const InverseMap sine_inv(moment_map(sine.model, sine.weight));
    const auto c = expansion_coefficients(sine_inv, kPi / 3.0, 3);
    double density_gap = 0.0;
    for (int n : {20, 100, 1000}) {
        for (int order : {1, 2}) {
            const double mass = integral([&](double x) { return edgeworth_density(c, x, n, order); }, line, 1e-13);
            density_gap = std::max(density_gap, std::abs(mass - 1.0));
        }
        const double second = integral([&](double x) { return x * x * edgeworth_density(c, x, n, 2); }, line, 1e-13);
        density_gap = std::max(density_gap, std::abs(second - (1.0 + 2.0 * c.B2 / n)));
    }
    o.require(density_gap <= 1e-8, fmt("density gap %.3g", density_gap));

    // Round trip G(m(theta)) = theta, and generic vs closed-form estimators.
    double round_trip = 0.0;
    double oracle_gap = 0.0;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const char* name : kBuiltins) {
        const auto mw = builtin_model(name);
        MomentMapOptions options;
        options.quadrature_tol = 1e-13;
        const InverseMap inv(moment_map(mw.model, mw.weight, options), 1e-14);
        const auto& th = mw.model->theta_interval();
        for (int i = 0; i <= 100; ++i) {
            const double theta = th.lo + th.length() * i / 100.0;
            round_trip = std::max(round_trip, std::abs(inv.invert(inv.map().m(theta)) - theta));
        }
        const auto closed = closed_form_for_builtin(parse_builtin(name), {}, 1e-13);
        const int sign = inv.map().orientation();
        const auto& range = inv.range();
        for (int i = 0; i < 100; ++i) {
            const double y = range.lo + (range.hi - range.lo) * (0.001 + 0.998 * unit(rng));
            const double generic = mme_estimate(inv, y).theta_hat;
            oracle_gap = std::max(oracle_gap, std::abs(generic - closed_form_mme(closed.form, sign * y, closed.constants)));
        }
    }
    o.require(round_trip <= 1e-9, fmt("round trip %.3g", round_trip));
    o.require(oracle_gap <= 1e-10, fmt("closed-form gap %.3g", oracle_gap));

    // Thinning against inversion.
    const int paths = 100000;
    double worst_ratio = 0.0;
    for (const char* name : kBuiltins) {
        const auto mw = builtin_model(name);
        const auto& th = mw.model->theta_interval();
        const double theta = th.lo + 0.4 * th.length();
        const PathSampler thin(mw.model, theta, SamplingMethod::thinning);
        const PathSampler inv(mw.model, theta, SamplingMethod::inversion);
        std::vector<double> a(paths), b(paths), ta, tb;
        for (int j = 0; j < paths; ++j) {
            const auto pa = thin.sample({1, 0, static_cast<std::uint32_t>(j)});
            const auto pb = inv.sample({2, 0, static_cast<std::uint32_t>(j)});
            a[static_cast<std::size_t>(j)] = static_cast<double>(pa.times.size());
            b[static_cast<std::size_t>(j)] = static_cast<double>(pb.times.size());
            if (j < 20000) {
                ta.insert(ta.end(), pa.times.begin(), pa.times.end());
                tb.insert(tb.end(), pb.times.begin(), pb.times.end());
            }
        }
        for (auto* v : {&a, &b, &ta, &tb}) std::sort(v->begin(), v->end());
        const double count_ratio = ks_two_sample(a, b) / (1.63 * std::sqrt(2.0 / paths));
        const double na = static_cast<double>(ta.size());
        const double nb = static_cast<double>(tb.size());
        const double time_ratio = ks_two_sample(ta, tb) / (1.63 * std::sqrt((na + nb) / (na * nb)));
        worst_ratio = std::max({worst_ratio, count_ratio, time_ratio});
        o.require(count_ratio < 1.0 && time_ratio < 1.0, std::string(name) + " sampler KS above critical value");
    }

    // Clamp semantics on boundary inputs.
    const auto clamp_model = builtin_model("periodic_sine", {{"alpha", 0.2}, {"beta", 1.2}});
    const InverseMap clamp_inv(moment_map(clamp_model.model, clamp_model.weight));
    const auto& range = clamp_inv.range();
    const bool clamp_ok = mme_estimate(clamp_inv, range.lo).clamped == Clamp::lower &&
                          mme_estimate(clamp_inv, range.lo).theta_hat == 0.2 &&
                          mme_estimate(clamp_inv, range.hi).clamped == Clamp::upper &&
                          mme_estimate(clamp_inv, range.hi).theta_hat == 1.2 &&
                          mme_estimate(clamp_inv, 2.0).theta_hat == 1.2 &&
                          mme_estimate(clamp_inv, -1.0).theta_hat == 0.2 &&
                          mme_estimate(clamp_inv, std::nextafter(range.lo, 1.0)).clamped == Clamp::none &&
                          mme_estimate(clamp_inv, std::nextafter(range.hi, 0.0)).clamped == Clamp::none;
    o.require(clamp_ok, "clamp semantics");

    // Merge determinism.
    auto config = example4_config();
    config.n = 100;
    config.N = 2000;
    const auto e = prepare_experiment(config);
    const bool merge_ok = same_bits(simulate_all(e, 1), simulate_all(e, 8));
    o.require(merge_ok, "1 and 8 workers differ");

    o.detail = fmt("hermite %.2g, density %.2g, round trip %.2g, closed form %.2g", hermite_gap, density_gap,
                   round_trip, oracle_gap) +
               fmt(", sampler KS / critical %.3f", worst_ratio) + (o.detail.empty() ? "" : "; " + o.detail);
    return o;
}

Outcome ac7_good_set_decay() {
    Outcome o;
    double previous = 2.0;
    for (int n : {50, 200, 800}) {
        auto config = example4_config();
        config.n = n;
        config.N = 10000;
        config.delta = 0.3;
        const auto e = prepare_experiment(config);
        const auto records = simulate_all(e, config.workers);
        double hits = 0.0;
        for (const auto& r : records) hits += std::abs(r.theta_hat - e.theta0) >= 0.3 ? 1.0 : 0.0;
        const double p = hits / static_cast<double>(records.size());
        o.detail += (o.detail.empty() ? "" : ", ") + fmt("P(n = %.0f) = %.4f", n, p);
        if (p > previous) {
            o.pass = false;
            o.detail += " INCREASED";
        }
        previous = p;
    }
    return o;
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"AC1 coefficient golden values", ac1_coefficients},
        {"AC2 second-moment reproduction", ac2_reproduce},
        {"AC3 bracket equals 2 B2", ac3_bracket_identity},
        {"AC4 eta moments", ac4_eta_moments},
        {"AC5 Edgeworth improves on normal", ac5_edgeworth_improvement},
        {"AC6 property suites", ac6_properties},
        {"AC7 good-set decay", ac7_good_set_decay},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
