#include "pmme/intensity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pmme {

namespace {

constexpr int kSpotThetaPoints = 10;
constexpr int kSpotTimePoints = 100;
constexpr int kBoundGridPoints = 1001;

double grid_point(const Interval& iv, int i, int count) {
    return iv.lo + iv.length() * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
}

} // namespace

IntensityModel::IntensityModel(IntensityModelSpec spec) : spec_(std::move(spec)) {
    if (!spec_.lambda) throw ValidationError("intensity model '" + spec_.label + "': lambda missing");
    const auto& th = spec_.theta_interval;
    if (!(std::isfinite(th.lo) && std::isfinite(th.hi) && th.lo < th.hi)) {
        throw ValidationError("intensity model '" + spec_.label +
                              "': theta interval must satisfy alpha < beta (finite)");
    }
    window_ = spec_.truncation.value_or(spec_.declared_window);
    if (!window_.finite()) {
        throw ValidationError("intensity model '" + spec_.label +
                              "': window is infinite and no truncation was declared");
    }
    if (!(window_.lo < window_.hi)) {
        throw ValidationError("intensity model '" + spec_.label + "': empty window");
    }
    if (spec_.truncation && (spec_.truncation->lo < spec_.declared_window.lo ||
                             spec_.truncation->hi > spec_.declared_window.hi)) {
        throw ValidationError("intensity model '" + spec_.label +
                              "': truncation must lie inside the declared window");
    }

    for (int i = 0; i < kSpotThetaPoints; ++i) {
        const double theta = grid_point(th, i, kSpotThetaPoints);
        const double bound = spec_.lambda_max ? spec_.lambda_max(theta) : 0.0;
        for (int j = 0; j <= kSpotTimePoints; ++j) {
            const double t = window_.lo + window_.length() * j / kSpotTimePoints;
            const double value = spec_.lambda(theta, t);
            if (!std::isfinite(value) || value < 0.0) {
                std::ostringstream os;
                os << "intensity model '" << spec_.label << "': lambda(" << theta << ", " << t
                   << ") = " << value << " is not a nonnegative finite rate";
                throw ValidationError(os.str());
            }
            if (spec_.lambda_max && value > bound * (1.0 + 1e-12)) {
                std::ostringstream os;
                os << "intensity model '" << spec_.label << "': lambda_max(" << theta << ") = " << bound
                   << " is below lambda = " << value << " at t = " << t;
                throw ValidationError(os.str());
            }
        }
    }
}

double IntensityModel::grid_bound(double theta) const {
    double best = 0.0;
    for (int j = 0; j < kBoundGridPoints; ++j) {
        const double t = window_.lo + window_.length() * j / (kBoundGridPoints - 1);
        best = std::max(best, spec_.lambda(theta, t));
    }
    return kGridBoundSafety * best;
}

double IntensityModel::lambda_max(double theta) const {
    return spec_.lambda_max ? spec_.lambda_max(theta) : grid_bound(theta);
}

double IntensityModel::lambda_derivative(double theta, double t, int order) const {
    if (!spec_.lambda_derivative) {
        throw ArgumentError("intensity model '" + spec_.label + "' has no analytic theta-derivative");
    }
    return spec_.lambda_derivative(theta, t, order);
}

double IntensityModel::total_intensity(double theta, double tol) const {
    return integral([&](double t) { return spec_.lambda(theta, t); }, window_, tol);
}

// ---------------------------------------------------------------------------
// Builtin catalog

Builtin parse_builtin(const std::string& name) {
    if (name == "amplitude") return Builtin::amplitude;
    if (name == "exp_decay") return Builtin::exp_decay;
    if (name == "gaussian") return Builtin::gaussian;
    if (name == "periodic_sine") return Builtin::periodic_sine;
    throw CatalogError("unknown builtin model '" + name +
                       "' (expected amplitude, exp_decay, gaussian or periodic_sine)");
}

std::string to_string(Builtin b) {
    switch (b) {
    case Builtin::amplitude: return "amplitude";
    case Builtin::exp_decay: return "exp_decay";
    case Builtin::gaussian: return "gaussian";
    case Builtin::periodic_sine: return "periodic_sine";
    }
    return "unknown";
}

BuiltinParams builtin_defaults(Builtin b) {
    switch (b) {
    case Builtin::amplitude:
        return {{"lambda0", 2.0}, {"tau", 1.0}, {"h_mod", 0.5}, {"g_is_h", 1.0},
                {"alpha", 0.5}, {"beta", 5.0}};
    case Builtin::exp_decay:
        return {{"q0", 1.0}, {"truncation", 30.0}, {"alpha", 0.5}, {"beta", 3.0}};
    case Builtin::gaussian:
        return {{"a", 1.0}, {"b", 0.0}, {"g_power", 2.0}, {"sigmas", 12.0},
                {"alpha", 0.5}, {"beta", 2.0}};
    case Builtin::periodic_sine:
        return {{"alpha", 0.1}, {"beta", 1.5}};
    }
    return {};
}

BuiltinParams resolve_builtin_params(Builtin b, const BuiltinParams& overrides) {
    auto params = builtin_defaults(b);
    for (const auto& [key, value] : overrides) {
        auto it = params.find(key);
        if (it == params.end()) {
            throw ValidationError("builtin '" + to_string(b) + "': unknown parameter '" + key + "'");
        }
        if (!std::isfinite(value)) {
            throw ValidationError("builtin '" + to_string(b) + "': parameter '" + key + "' is not finite");
        }
        it->second = value;
    }
    return params;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ModelAndWeight make_amplitude(const BuiltinParams& p) {
    const double lambda0 = p.at("lambda0");
    const double tau = p.at("tau");
    const double h_mod = p.at("h_mod");
    const bool g_is_h = p.at("g_is_h") != 0.0;
    if (!(lambda0 > 0.0)) throw ValidationError("amplitude: lambda0 must be > 0");
    if (!(tau > 0.0)) throw ValidationError("amplitude: tau must be > 0");
    if (!(std::abs(h_mod) < 1.0)) throw ValidationError("amplitude: |h_mod| must be < 1 (h positive)");
    if (!(p.at("alpha") >= 0.0)) throw ValidationError("amplitude: alpha must be >= 0");

    const double omega = kTwoPi / tau;
    auto h = [=](double t) { return 1.0 + h_mod * std::cos(omega * t); };
    IntensityModelSpec spec;
    spec.label = "amplitude";
    spec.lambda = [=](double theta, double t) { return theta * h(t) + lambda0; };
    spec.theta_interval = {p.at("alpha"), p.at("beta")};
    spec.declared_window = {0.0, tau};
    spec.lambda_max = [=](double theta) { return std::abs(theta) * (1.0 + std::abs(h_mod)) + lambda0; };
    spec.lambda_derivative = [=](double, double t, int order) { return order == 1 ? h(t) : 0.0; };

    WeightFunction w;
    if (g_is_h) {
        w = {h, "h"};
    } else {
        w = {[](double) { return 1.0; }, "one"};
    }
    return {std::make_shared<const IntensityModel>(std::move(spec)), std::move(w)};
}

ModelAndWeight make_exp_decay(const BuiltinParams& p) {
    const double q0 = p.at("q0");
    const double trunc = p.at("truncation");
    if (!(q0 >= 0.0)) throw ValidationError("exp_decay: q0 must be >= 0");
    if (!(trunc > 0.0)) throw ValidationError("exp_decay: truncation must be > 0");
    if (!(p.at("alpha") > 0.0)) throw ValidationError("exp_decay: alpha must be > 0");

    IntensityModelSpec spec;
    spec.label = "exp_decay";
    spec.lambda = [=](double theta, double t) {
        const double t2 = t * t;
        return (1.0 + t2 * t2) * std::exp(-theta * t2) + q0 * std::exp(-t);
    };
    spec.theta_interval = {p.at("alpha"), p.at("beta")};
    spec.declared_window = {0.0, std::numeric_limits<double>::infinity()};
    spec.truncation = Interval{0.0, trunc};
    // max over u = t^2 >= 0 of (1 + u^2) exp(-theta u); interior maximum only for theta < 1.
    spec.lambda_max = [=](double theta) {
        double peak = 1.0;
        if (theta < 1.0) {
            const double u = (1.0 + std::sqrt(1.0 - theta * theta)) / theta;
            peak = std::max(peak, (1.0 + u * u) * std::exp(-theta * u));
        }
        return peak + q0;
    };
    spec.lambda_derivative = [](double theta, double t, int order) {
        const double t2 = t * t;
        return std::pow(-t2, order) * (1.0 + t2 * t2) * std::exp(-theta * t2);
    };
    WeightFunction w{[](double t) { return 2.0 * t / (1.0 + t * t * t * t); }, "2t/(1+t^4)"};
    return {std::make_shared<const IntensityModel>(std::move(spec)), std::move(w)};
}

ModelAndWeight make_gaussian(const BuiltinParams& p) {
    const double a = p.at("a");
    const double b = p.at("b");
    const double power = p.at("g_power");
    const double sigmas = p.at("sigmas");
    if (!(a > 0.0)) throw ValidationError("gaussian: a must be > 0");
    if (!(p.at("alpha") > 0.0)) throw ValidationError("gaussian: alpha must be > 0");
    if (power != 1.0 && power != 2.0) throw ValidationError("gaussian: g_power must be 1 or 2");
    if (!(sigmas > 0.0)) throw ValidationError("gaussian: sigmas must be > 0");

    const double half_width = sigmas * p.at("beta");
    IntensityModelSpec spec;
    spec.label = "gaussian";
    spec.lambda = [=](double theta, double t) {
        const double s = t - b;
        return a * std::exp(-s * s / (2.0 * theta * theta));
    };
    spec.theta_interval = {p.at("alpha"), p.at("beta")};
    const double inf = std::numeric_limits<double>::infinity();
    spec.declared_window = {-inf, inf};
    spec.truncation = Interval{b - half_width, b + half_width};
    spec.lambda_max = [=](double) { return a; };
    spec.lambda_derivative = [=](double theta, double t, int order) {
        const double s2 = (t - b) * (t - b);
        const double lam = a * std::exp(-s2 / (2.0 * theta * theta));
        const double th2 = theta * theta;
        const double th3 = th2 * theta;
        switch (order) {
        case 1: return lam * s2 / th3;
        case 2: return lam * (s2 * s2 / (th3 * th3) - 3.0 * s2 / (th2 * th2));
        case 3:
            return lam * (s2 * s2 * s2 / (th3 * th3 * th3) - 9.0 * s2 * s2 / (th3 * th2 * th2) +
                          12.0 * s2 / (th3 * th2));
        default: throw ArgumentError("gaussian: analytic derivatives available up to order 3");
        }
    };
    WeightFunction w;
    if (power == 2.0) {
        w = {[=](double t) { return (t - b) * (t - b); }, "(t-b)^2"};
    } else {
        w = {[=](double t) { return std::abs(t - b); }, "|t-b|"};
    }
    return {std::make_shared<const IntensityModel>(std::move(spec)), std::move(w)};
}

ModelAndWeight make_periodic_sine(const BuiltinParams& p) {
    IntensityModelSpec spec;
    spec.label = "periodic_sine";
    if (!(p.at("alpha") > 0.0 && p.at("beta") < std::numbers::pi / 2.0)) {
        throw ValidationError("periodic_sine: theta interval must lie inside (0, pi/2)");
    }
    spec.lambda = [](double theta, double t) { return 2.0 * std::sin(kTwoPi * t + theta) + 3.0; };
    spec.theta_interval = {p.at("alpha"), p.at("beta")};
    spec.declared_window = {0.0, 1.0};
    spec.lambda_max = [](double) { return 5.0; };
    spec.lambda_derivative = [](double theta, double t, int order) {
        return 2.0 * std::sin(kTwoPi * t + theta + order * std::numbers::pi / 2.0);
    };
    WeightFunction w{[](double t) { return std::cos(kTwoPi * t); }, "cos(2 pi t)"};
    return {std::make_shared<const IntensityModel>(std::move(spec)), std::move(w)};
}

} // namespace

ModelAndWeight builtin_model(Builtin b, const BuiltinParams& overrides) {
    const auto params = resolve_builtin_params(b, overrides);
    switch (b) {
    case Builtin::amplitude: return make_amplitude(params);
    case Builtin::exp_decay: return make_exp_decay(params);
    case Builtin::gaussian: return make_gaussian(params);
    case Builtin::periodic_sine: return make_periodic_sine(params);
    }
    throw CatalogError("unknown builtin");
}

ModelAndWeight builtin_model(const std::string& name, const BuiltinParams& overrides) {
    return builtin_model(parse_builtin(name), overrides);
}

} // namespace pmme
