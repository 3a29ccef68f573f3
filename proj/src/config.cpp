#include "pmme/config.hpp"

#include "pmme/expression.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace pmme {

using nlohmann::json;

std::vector<double> XGrid::values() const {
    if (points < 2 || !(hi > lo)) throw ValidationError("x_grid: need points >= 2 and hi > lo");
    std::vector<double> xs(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    return xs;
}

ExperimentConfig example4_config() {
    ExperimentConfig c;
    c.model.name = "periodic_sine";
    c.theta0 = std::numbers::pi / 3.0;
    c.n = 1000;
    c.N = 10000;
    return c;
}

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw ValidationError("config: " + where + ": " + what);
}

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) bad(where, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) bad(where, "unknown key '" + key + "'");
    }
}

double to_bound(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    bad(where, "expected a number, \"inf\" or \"-inf\"");
}

json from_bound(double x) {
    if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
    return x;
}

Interval to_interval(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) bad(where, "expected [lo, hi]");
    return {to_bound(v[0], where), to_bound(v[1], where)};
}

json from_interval(const Interval& i) { return json::array({from_bound(i.lo), from_bound(i.hi)}); }

double number(const json& v, const std::string& where) {
    if (!v.is_number()) bad(where, "expected a number");
    return v.get<double>();
}

int integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) bad(where, "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) bad(where, "out of range");
    return static_cast<int>(x);
}

std::string text(const json& v, const std::string& where) {
    if (!v.is_string()) bad(where, "expected a string");
    return v.get<std::string>();
}

ModelSelection parse_model(const json& j) {
    ModelSelection m;
    if (!j.is_object()) bad("model", "expected an object");
    if (!j.contains("name")) bad("model", "missing 'name'");
    m.name = text(j.at("name"), "model.name");
    if (m.name == "user") {
        check_keys(j, "model",
                   {"name", "label", "lambda", "g", "window", "truncation", "theta_interval", "lambda_max"});
        UserModelSpec u;
        for (const char* key : {"lambda", "g", "window", "theta_interval"}) {
            if (!j.contains(key)) bad("model", std::string("user model needs '") + key + "'");
        }
        if (j.contains("label")) u.label = text(j.at("label"), "model.label");
        u.lambda = text(j.at("lambda"), "model.lambda");
        u.g = text(j.at("g"), "model.g");
        u.window = to_interval(j.at("window"), "model.window");
        if (j.contains("truncation") && !j.at("truncation").is_null()) {
            u.truncation = to_interval(j.at("truncation"), "model.truncation");
        }
        u.theta_interval = to_interval(j.at("theta_interval"), "model.theta_interval");
        if (j.contains("lambda_max")) u.lambda_max = text(j.at("lambda_max"), "model.lambda_max");
        m.user = std::move(u);
        return m;
    }
    check_keys(j, "model", {"name", "params"});
    (void)parse_builtin(m.name);
    if (j.contains("params")) {
        const auto& params = j.at("params");
        if (!params.is_object()) bad("model.params", "expected an object");
        for (const auto& [key, value] : params.items()) m.params[key] = number(value, "model.params." + key);
    }
    return m;
}

json model_to_json(const ModelSelection& m) {
    if (m.user) {
        const auto& u = *m.user;
        json j{{"name", "user"},
               {"label", u.label},
               {"lambda", u.lambda},
               {"g", u.g},
               {"window", from_interval(u.window)},
               {"theta_interval", from_interval(u.theta_interval)},
               {"lambda_max", u.lambda_max}};
        j["truncation"] = u.truncation ? from_interval(*u.truncation) : json(nullptr);
        return j;
    }
    json params = json::object();
    for (const auto& [key, value] : m.params) params[key] = value;
    return {{"name", m.name}, {"params", params}};
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: malformed JSON: ") + e.what());
    }
    check_keys(j, "root",
               {"schema_version", "model", "theta_interval", "theta0", "n", "N", "seed", "k", "delta", "x_grid",
                "tolerances", "sampler", "workers", "output_dir"});
    ExperimentConfig c;
    if (j.contains("schema_version")) {
        c.schema_version = integer(j.at("schema_version"), "schema_version");
        if (c.schema_version != kConfigSchemaVersion) {
            bad("schema_version", "unsupported version " + std::to_string(c.schema_version));
        }
    }
    if (j.contains("model")) c.model = parse_model(j.at("model"));
    auto optional_number = [&](const char* key) -> std::optional<double> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        return number(j.at(key), key);
    };
    if (j.contains("theta_interval") && !j.at("theta_interval").is_null()) {
        c.theta_interval = to_interval(j.at("theta_interval"), "theta_interval");
    }
    c.theta0 = optional_number("theta0");
    c.delta = optional_number("delta");
    if (j.contains("n")) c.n = integer(j.at("n"), "n");
    if (j.contains("N")) c.N = integer(j.at("N"), "N");
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) bad("seed", "expected a nonnegative integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("k")) c.k = integer(j.at("k"), "k");
    if (j.contains("x_grid")) {
        const auto& g = j.at("x_grid");
        check_keys(g, "x_grid", {"lo", "hi", "points"});
        if (g.contains("lo")) c.x_grid.lo = number(g.at("lo"), "x_grid.lo");
        if (g.contains("hi")) c.x_grid.hi = number(g.at("hi"), "x_grid.hi");
        if (g.contains("points")) c.x_grid.points = integer(g.at("points"), "x_grid.points");
    }
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        check_keys(t, "tolerances", {"quadrature", "root"});
        if (t.contains("quadrature")) c.tolerances.quadrature = number(t.at("quadrature"), "tolerances.quadrature");
        if (t.contains("root")) c.tolerances.root = number(t.at("root"), "tolerances.root");
    }
    if (j.contains("sampler")) {
        try {
            c.sampler = parse_sampling_method(text(j.at("sampler"), "sampler"));
        } catch (const Error& e) {
            bad("sampler", e.what());
        }
    }
    if (j.contains("workers")) c.workers = integer(j.at("workers"), "workers");
    if (j.contains("output_dir")) c.output_dir = text(j.at("output_dir"), "output_dir");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string dump_config(const ExperimentConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["model"] = model_to_json(c.model);
    j["theta_interval"] = c.theta_interval ? from_interval(*c.theta_interval) : json(nullptr);
    j["theta0"] = c.theta0 ? json(*c.theta0) : json(nullptr);
    j["n"] = c.n;
    j["N"] = c.N;
    j["seed"] = c.seed;
    j["k"] = c.k;
    j["delta"] = c.delta ? json(*c.delta) : json(nullptr);
    j["x_grid"] = {{"lo", c.x_grid.lo}, {"hi", c.x_grid.hi}, {"points", c.x_grid.points}};
    j["tolerances"] = {{"quadrature", c.tolerances.quadrature}, {"root", c.tolerances.root}};
    j["sampler"] = to_string(c.sampler);
    j["workers"] = c.workers;
    j["output_dir"] = c.output_dir;
    return j.dump(2) + "\n";
}

ModelAndWeight resolve_model(const ExperimentConfig& config) {
    const auto& sel = config.model;
    if (!sel.user) {
        auto params = sel.params;
        if (config.theta_interval) {
            params["alpha"] = config.theta_interval->lo;
            params["beta"] = config.theta_interval->hi;
        }
        return builtin_model(sel.name, params);
    }
    const auto& u = *sel.user;
    if (!u.window.finite() && !u.truncation) {
        throw ValidationError("user model '" + u.label + "': window is infinite and no truncation was declared");
    }
    const auto lambda = Expression::parse(u.lambda);
    const auto g = Expression::parse(u.g);
    if (g.uses_theta()) throw ValidationError("user model '" + u.label + "': g must not depend on theta");

    IntensityModelSpec spec;
    spec.label = u.label;
    spec.lambda = [lambda](double theta, double t) { return lambda(theta, t); };
    spec.theta_interval = config.theta_interval.value_or(u.theta_interval);
    spec.declared_window = u.window;
    spec.truncation = u.truncation;
    if (!u.lambda_max.empty()) {
        const auto bound = Expression::parse(u.lambda_max);
        spec.lambda_max = [bound](double theta) { return bound(theta, 0.0); };
    }
    WeightFunction w{[g](double t) { return g(0.0, t); }, u.g};
    return {std::make_shared<const IntensityModel>(std::move(spec)), std::move(w)};
}

} // namespace pmme
