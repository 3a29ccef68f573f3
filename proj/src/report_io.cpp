#include "pmme/report_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace pmme {

using nlohmann::ordered_json;

namespace {

ordered_json num(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

ordered_json estimate(const Estimate& e) { return {{"value", num(e.value)}, {"se", num(e.se)}}; }

ordered_json coefficients(const ExpansionCoefficients& c) {
    return {
        {"theta0", num(c.theta0)},
        {"psi", {{"k", c.psi.k}, {"psi1", num(c.psi.psi1)}, {"psi2", num(c.psi.psi2)}, {"psi3", num(c.psi.psi3)}}},
        {"am",
         {{"a2", num(c.am.a2)},
          {"a3", num(c.am.a3)},
          {"a4", num(c.am.a4)},
          {"ahat3", num(c.am.ahat3)},
          {"ahat4", num(c.am.ahat4)}}},
        {"b2", num(c.b2)},
        {"b3", num(c.b3)},
        {"B1", num(c.B1)},
        {"B2", num(c.B2)},
        {"B3", num(c.B3)},
        {"B4", num(c.B4)},
        {"B6", num(c.B6)},
        {"K", num(c.K)},
    };
}

std::string format17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

std::string coefficients_json(const ExpansionCoefficients& c) {
    ordered_json j = coefficients(c);
    j["second_moment_bracket"] = num(second_moment_bracket(c));
    return j.dump(2) + "\n";
}

std::string report_json(const MonteCarloReport& r) {
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["model"] = r.model;
    j["sampler"] = r.sampler;
    j["n"] = r.n;
    j["N"] = r.N;
    j["seed"] = r.seed;
    j["k"] = r.k;
    j["theta0"] = num(r.theta0);
    j["coefficients"] = coefficients(r.coefficients);
    j["predictions"] = {
        {"second_moment_limit", num(r.predictions.second_moment_limit)},
        {"scaled_second_moment", num(r.predictions.scaled_second_moment)},
        {"mean_bias", num(r.predictions.mean_bias)},
        {"eta2", num(r.predictions.eta2)},
        {"eta3", num(r.predictions.eta3)},
        {"eta4", num(r.predictions.eta4)},
    };
    j["abs_moment1"] = estimate(r.abs_moment1);
    j["abs_moment2"] = estimate(r.abs_moment2);
    j["scaled_second_moment"] = estimate(r.scaled_second_moment);
    j["mean_bias"] = estimate(r.mean_bias);
    j["eta_moments"] = {{"eta1", estimate(r.eta1)},
                        {"eta2", estimate(r.eta2)},
                        {"eta3", estimate(r.eta3)},
                        {"eta4", estimate(r.eta4)}};
    j["ks"] = {{"gaussian", num(r.ks_gaussian)},
               {"edgeworth1", num(r.ks_edgeworth1)},
               {"edgeworth2", num(r.ks_edgeworth2)}};
    j["clamp_frequency"] = {{"lower", estimate(r.clamp_lower)}, {"upper", estimate(r.clamp_upper)}};
    const auto& g = r.good_set;
    j["good_set"] = {
        {"delta", num(g.delta)},
        {"b1_violation", estimate(g.b1_violation)},
        {"c_k1", num(g.c_k1)},
        {"b2_threshold", num(g.b2_threshold)},
        {"b2_violation", estimate(g.b2_violation)},
        {"kappa", num(g.kappa)},
        {"rho_lower", num(g.rho_lower)},
        {"empty_probability", num(g.empty_probability)},
    };
    auto rows = ordered_json::array();
    for (const auto& row : r.cdf) {
        rows.push_back({{"x", num(row.x)},
                        {"empirical", num(row.empirical)},
                        {"gaussian", num(row.gaussian)},
                        {"edgeworth1", num(row.edgeworth1)},
                        {"edgeworth2", num(row.edgeworth2)}});
    }
    j["cdf"] = rows;
    j["conditions_verified"] = r.conditions_verified;
    j["condition_failures"] = r.condition_failures;
    return j.dump(2) + "\n";
}

std::string conditions_json(const ConditionReport& r) {
    ordered_json j;
    auto list = [](const std::vector<double>& v) {
        auto a = ordered_json::array();
        for (double x : v) a.push_back(num(x));
        return a;
    };
    j["all_pass"] = r.all_pass();
    j["moments"] = {{"pass", r.moments_pass}, {"sup_weight_moments", list(r.weight_moments)}};
    j["monotone"] = {{"pass", r.monotone_pass}, {"kappa", num(r.kappa)}, {"orientation", r.orientation}};
    j["smoothness"] = {{"pass", r.smoothness_pass}, {"relative_change", list(r.smoothness_change)}};
    j["cramer"] = {{"pass", r.cramer_pass},
                   {"theta0", num(r.cramer_theta0)},
                   {"min", num(r.cramer_min)},
                   {"argmin_v", num(r.cramer_argmin_v)}};
    j["failures"] = r.failures;
    return j.dump(2) + "\n";
}

std::string estimate_json(const MmeResult& result) {
    ordered_json j{{"theta_hat", num(result.theta_hat)},
                   {"clamped", to_string(result.clamped)},
                   {"mbar", num(result.mbar)}};
    return j.dump(2) + "\n";
}

std::string cdf_csv(const std::vector<CdfRow>& rows) {
    std::string out = "x,empirical,gaussian,edgeworth1,edgeworth2\n";
    for (const auto& r : rows) {
        out += format17(r.x) + "," + format17(r.empirical) + "," + format17(r.gaussian) + "," +
               format17(r.edgeworth1) + "," + format17(r.edgeworth2) + "\n";
    }
    return out;
}

std::string paths_csv(const std::vector<PathRecord>& paths) {
    std::string out = "replication,path_index,event_time\n";
    for (const auto& p : paths) {
        const std::string prefix = std::to_string(p.replication) + "," + std::to_string(p.path_index) + ",";
        for (double t : p.times) out += prefix + format17(t) + "\n";
    }
    return out;
}

void write_artifact(const std::string& dir, const std::string& name, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigurationError("cannot create output directory '" + dir + "': " + ec.message());
    const fs::path target = fs::path(dir) / name;
    const fs::path tmp = fs::path(dir) / ("." + name + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigurationError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp, ec);
            throw ConfigurationError("write failed for '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ConfigurationError("cannot move artifact into place at '" + target.string() + "'");
    }
}

} // namespace pmme
