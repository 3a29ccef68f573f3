#include "pmme/cli.hpp"

#include "pmme/conditions.hpp"
#include "pmme/config.hpp"
#include "pmme/montecarlo.hpp"
#include "pmme/report_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace pmme {

namespace {

struct Overrides {
    std::string config_path;
    std::string model;
    std::optional<std::uint64_t> seed;
    std::optional<int> n;
    std::optional<int> N;
    std::optional<double> theta0;
    std::optional<std::string> out;
    std::optional<int> workers;
    bool dump_config{false};
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--model", o.model, "Builtin model name (replaces the config model)");
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--n", o.n, "Observations per replication");
    sub->add_option("--N", o.N, "Number of replications");
    sub->add_option("--theta0", o.theta0, "True parameter value");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--workers", o.workers, "Worker threads (0: all cores)");
    sub->add_flag("--dump-config", o.dump_config, "Print the resolved config and exit");
}

ExperimentConfig resolve_config(const Overrides& o, const ExperimentConfig& preset) {
    ExperimentConfig c = o.config_path.empty() ? preset : load_config(o.config_path);
    if (!o.model.empty()) {
        (void)parse_builtin(o.model);
        c.model = ModelSelection{o.model, {}, std::nullopt};
        c.theta0.reset();
    }
    if (o.seed) c.seed = *o.seed;
    if (o.n) c.n = *o.n;
    if (o.N) c.N = *o.N;
    if (o.theta0) c.theta0 = *o.theta0;
    if (o.out) c.output_dir = *o.out;
    if (o.workers) c.workers = *o.workers;
    return c;
}

std::string g5(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5g", x);
    return buf;
}

class Table {
public:
    void row(std::string name, std::string value) { rows_.emplace_back(std::move(name), std::move(value)); }
    void row(std::string name, double value) { row(std::move(name), g5(value)); }
    void row(std::string name, const Estimate& e) { row(std::move(name), g5(e.value) + " +- " + g5(e.se)); }

    void print(std::ostream& out) const {
        std::size_t width = 0;
        for (const auto& [name, _] : rows_) width = std::max(width, name.size());
        for (const auto& [name, value] : rows_) {
            out << "  " << name << std::string(width - name.size() + 2, ' ') << value << "\n";
        }
    }

private:
    std::vector<std::pair<std::string, std::string>> rows_;
};

void coefficient_rows(Table& t, const ExpansionCoefficients& c) {
    t.row("theta0", c.theta0);
    t.row("psi1", c.psi.psi1);
    t.row("psi2", c.psi.psi2);
    t.row("psi3", c.psi.psi3);
    t.row("a2", c.am.a2);
    t.row("a3", c.am.a3);
    t.row("a4", c.am.a4);
    t.row("ahat3", c.am.ahat3);
    t.row("ahat4", c.am.ahat4);
    t.row("b2", c.b2);
    t.row("b3", c.b3);
    t.row("B1", c.B1);
    t.row("B2", c.B2);
    t.row("B3", c.B3);
    t.row("B4", c.B4);
    t.row("B6", c.B6);
    t.row("K", c.K);
}

void print_header(std::ostream& out, const Experiment& e) {
    out << "model " << e.model.model->label() << ", g = " << e.model.weight.label << ", theta0 = " << g5(e.theta0)
        << ", n = " << e.config.n << ", N = " << e.config.N << ", seed = " << e.config.seed << "\n";
}

int cmd_coeffs(const ExperimentConfig& config, std::ostream& out) {
    const auto e = prepare_experiment(config);
    print_header(out, e);
    Table t;
    coefficient_rows(t, e.coefficients);
    t.row("second moment bracket", second_moment_bracket(e.coefficients));
    t.print(out);
    write_artifact(config.output_dir, "coeffs.json", coefficients_json(e.coefficients));
    return 0;
}

int cmd_simulate(const ExperimentConfig& config, int replications, std::ostream& out) {
    if (replications < 1) throw ConfigurationError("simulate: --replications must be >= 1");
    const auto e = prepare_experiment(config);
    print_header(out, e);
    const auto& sampler = e.sampler->path_sampler();
    std::vector<PathRecord> paths;
    std::vector<double> counts;
    for (int r = 0; r < replications; ++r) {
        for (int j = 0; j < config.n; ++j) {
            const StreamKey key{config.seed, static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(j)};
            auto path = sampler.sample(key);
            counts.push_back(static_cast<double>(path.times.size()));
            paths.push_back({key.replication, key.path, std::move(path.times)});
        }
    }
    Table t;
    t.row("paths", std::to_string(paths.size()));
    t.row("mean count", mean_estimate(counts));
    t.row("Lambda(window)", e.model.model->total_intensity(e.theta0, config.tolerances.quadrature));
    t.print(out);
    write_artifact(config.output_dir, "paths.csv", paths_csv(paths));
    return 0;
}

int cmd_estimate(const ExperimentConfig& config, std::optional<double> mbar, std::ostream& out) {
    const auto e = prepare_experiment(config);
    print_header(out, e);
    double value;
    if (mbar) {
        // --mbar is given in the user's sign of g; the estimator works with the oriented map.
        value = e.inverse->map().orientation() * *mbar;
    } else {
        value = e.sampler->statistic(config.n, {config.seed, 0});
    }
    auto result = mme_estimate(*e.inverse, value);
    result.mbar = e.inverse->map().orientation() * value;
    Table t;
    t.row("mbar", result.mbar);
    t.row("theta_hat", result.theta_hat);
    t.row("clamped", to_string(result.clamped));
    t.print(out);
    write_artifact(config.output_dir, "estimate.json", estimate_json(result));
    return 0;
}

void moment_rows(Table& t, const MonteCarloReport& r) {
    t.row("limit psi1^2 a2", r.predictions.second_moment_limit);
    t.row("predicted n E(err^2)", r.predictions.scaled_second_moment);
    t.row("empirical n E(err^2)", r.scaled_second_moment);
    t.row("predicted bias", r.predictions.mean_bias);
    t.row("empirical bias", r.mean_bias);
    t.row("E|err|", r.abs_moment1);
    t.row("E eta^2 (pred " + g5(r.predictions.eta2) + ")", r.eta2);
    t.row("E eta^3 (pred " + g5(r.predictions.eta3) + ")", r.eta3);
    t.row("E eta^4 (pred " + g5(r.predictions.eta4) + ")", r.eta4);
    t.row("clamp lower", r.clamp_lower);
    t.row("clamp upper", r.clamp_upper);
    t.row("P(|err| >= delta)", r.good_set.b1_violation);
    t.row("P(B2 complement)", r.good_set.b2_violation);
    t.row("conditions verified", r.conditions_verified ? "yes" : "no");
}

void ks_rows(Table& t, const MonteCarloReport& r) {
    t.row("KS vs normal", r.ks_gaussian);
    t.row("KS vs Edgeworth order 1", r.ks_edgeworth1);
    t.row("KS vs Edgeworth order 2", r.ks_edgeworth2);
}

MonteCarloReport run_and_header(const ExperimentConfig& config, std::ostream& out) {
    const auto e = prepare_experiment(config);
    print_header(out, e);
    const auto records = simulate_all(e, config.workers);
    return aggregate(e, records);
}

int cmd_validate_moments(const ExperimentConfig& config, std::ostream& out) {
    const auto r = run_and_header(config, out);
    Table t;
    moment_rows(t, r);
    t.print(out);
    write_artifact(config.output_dir, "report.json", report_json(r));
    return 0;
}

int cmd_validate_cdf(const ExperimentConfig& config, std::ostream& out) {
    const auto r = run_and_header(config, out);
    Table t;
    ks_rows(t, r);
    t.print(out);
    out << "\n  " << "x" << "\tempirical\tnormal\tedgeworth1\tedgeworth2\n";
    for (std::size_t i = 0; i < r.cdf.size(); i += 10) {
        const auto& row = r.cdf[i];
        out << "  " << g5(row.x) << "\t" << g5(row.empirical) << "\t" << g5(row.gaussian) << "\t"
            << g5(row.edgeworth1) << "\t" << g5(row.edgeworth2) << "\n";
    }
    write_artifact(config.output_dir, "cdf.csv", cdf_csv(r.cdf));
    write_artifact(config.output_dir, "report.json", report_json(r));
    return 0;
}

int cmd_reproduce(const ExperimentConfig& config, std::ostream& out) {
    const auto r = run_and_header(config, out);
    Table t;
    t.row("predicted n E(err^2)", r.predictions.scaled_second_moment);
    t.row("limit", r.predictions.second_moment_limit);
    t.row("empirical n E(err^2)", r.scaled_second_moment);
    t.print(out);
    write_artifact(config.output_dir, "report.json", report_json(r));
    write_artifact(config.output_dir, "cdf.csv", cdf_csv(r.cdf));
    return 0;
}

int cmd_check_conditions(const ExperimentConfig& config, int max_m, std::ostream& out) {
    const auto mw = resolve_model(config);
    const auto& th = mw.model->theta_interval();
    ConditionGrid grid;
    grid.theta0 = config.theta0.value_or(0.5 * (th.lo + th.hi));
    grid.k = config.k;
    grid.quadrature_tol = config.tolerances.quadrature;
    const auto report = check_conditions(*mw.model, mw.weight, max_m, grid);
    out << "model " << mw.model->label() << ", g = " << mw.weight.label << "\n";
    Table t;
    t.row("finite moments", report.moments_pass ? "pass" : "fail");
    t.row("monotone map", report.monotone_pass ? "pass" : "fail");
    t.row("kappa", report.kappa);
    t.row("smoothness", report.smoothness_pass ? "pass" : "fail");
    t.row("Cramer proxy", report.cramer_pass ? "pass" : "fail");
    t.row("Cramer min", report.cramer_min);
    t.row("Cramer argmin v", report.cramer_argmin_v);
    t.print(out);
    for (const auto& f : report.failures) out << "  failure: " << f << "\n";
    write_artifact(config.output_dir, "conditions.json", conditions_json(report));
    return 0;
}

void error_record(std::ostream& err, const std::string& kind, const std::string& message) {
    nlohmann::ordered_json j{{"error", {{"kind", kind}, {"message", message}}}};
    err << j.dump() << "\n";
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Method-of-moments estimation for inhomogeneous Poisson processes"};
    app.require_subcommand(1);
    Overrides o;
    std::optional<double> mbar;
    int replications = 1;
    int max_m = 8;

    auto* coeffs = app.add_subcommand("coeffs", "Expansion coefficients at theta0");
    auto* simulate = app.add_subcommand("simulate", "Sample event paths to paths.csv");
    simulate->add_option("--replications", replications, "Replications to dump (n paths each)");
    auto* estimate = app.add_subcommand("estimate", "Estimate theta from a given or sampled mbar");
    estimate->add_option("--mbar", mbar, "Empirical moment; sampled when absent");
    auto* vmoments = app.add_subcommand("validate-moments", "Monte Carlo vs moment expansion");
    auto* vcdf = app.add_subcommand("validate-cdf", "Monte Carlo vs Edgeworth approximations");
    auto* repro = app.add_subcommand("reproduce-example4", "periodic_sine, theta0 = pi/3, n = 1000, N = 10000");
    auto* conditions = app.add_subcommand("check-conditions", "Numerical regularity checks");
    conditions->add_option("--max-m", max_m, "Highest moment order of |g|");
    for (auto* sub : {coeffs, simulate, estimate, vmoments, vcdf, repro, conditions}) add_common(sub, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        error_record(err, "usage", e.what());
        return 2;
    }

    try {
        if (*repro) {
            o.config_path.clear();
            o.model.clear();
        }
        const auto config = resolve_config(o, example4_config());
        if (o.dump_config) {
            out << dump_config(config);
            return 0;
        }
        if (*coeffs) return cmd_coeffs(config, out);
        if (*simulate) return cmd_simulate(config, replications, out);
        if (*estimate) return cmd_estimate(config, mbar, out);
        if (*vmoments) return cmd_validate_moments(config, out);
        if (*vcdf) return cmd_validate_cdf(config, out);
        if (*repro) return cmd_reproduce(config, out);
        if (*conditions) return cmd_check_conditions(config, max_m, out);
    } catch (const Error& e) {
        error_record(err, e.kind(), e.what());
        return 1;
    } catch (const std::exception& e) {
        error_record(err, "internal", e.what());
        return 1;
    }
    return 1;
}

} // namespace pmme
