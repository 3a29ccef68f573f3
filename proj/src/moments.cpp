#include "pmme/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace pmme {

namespace {

// Fourth-order central stencils: offsets -3..3, divided by h^order * denominator.
struct Stencil {
    std::array<double, 7> weights;
    double denominator;
};

constexpr std::array<Stencil, 4> kStencils{{
    {{0, 0, 0, 1, 0, 0, 0}, 1.0},
    {{0, 1, -8, 0, 8, -1, 0}, 12.0},
    {{0, -1, 16, -30, 16, -1, 0}, 12.0},
    {{1, -8, 13, 0, -13, 8, -1}, 8.0},
}};

} // namespace

double MomentMap::fd_step(double theta, int order) {
    // Balances O(h^4) truncation against eps / h^order roundoff.
    static constexpr std::array<double, 4> base{0.0, 7e-4, 2.5e-3, 6e-3};
    return base[static_cast<std::size_t>(order)] * std::max(1.0, std::abs(theta));
}

MomentMap::MomentMap(ModelPtr model, WeightFunction weight, MomentMapOptions options)
    : model_(std::move(model)), weight_(std::move(weight)), options_(options) {
    if (!model_) throw ArgumentError("moment map: null model");
    if (!weight_.g) throw ArgumentError("moment map: weight function missing");
    if (!(options_.quadrature_tol > 0.0)) throw ConfigurationError("moment map: quadrature_tol must be > 0");
    if (options_.monotonicity_grid < 2) throw ConfigurationError("moment map: monotonicity grid needs >= 2 points");

    const auto& th = model_->theta_interval();
    const int points = options_.monotonicity_grid;
    int sign = 0;
    for (int i = 0; i < points; ++i) {
        const double theta = th.lo + th.length() * i / (points - 1);
        const double slope = oriented_integral(theta, 1);
        const int s = slope > 0.0 ? 1 : (slope < 0.0 ? -1 : 0);
        if (s == 0 || (sign != 0 && s != sign)) {
            std::ostringstream os;
            os << "moment map for '" << model_->label() << "' with g = " << weight_.label
               << " is not strictly monotone: m'(" << theta << ") = " << slope;
            throw NonMonotoneError(os.str());
        }
        sign = s;
    }
    orientation_ = sign;
}

double raw_moment_derivative(const IntensityModel& model, const WeightFunction& g, double theta, int order,
                             double tol) {
    if (order < 0 || order > 3) throw ArgumentError("moment derivative order must be in 0..3");
    const auto& window = model.window();
    if (order == 0) {
        return integral([&](double t) { return g(t) * model.lambda(theta, t); }, window, tol);
    }
    if (model.has_analytic_derivative()) {
        return integral([&](double t) { return g(t) * model.lambda_derivative(theta, t, order); }, window, tol);
    }
    const auto& stencil = kStencils[static_cast<std::size_t>(order)];
    const double h = MomentMap::fd_step(theta, order);
    const double scale = 1.0 / (stencil.denominator * std::pow(h, order));
    // The difference quotient carries roundoff of about eps * sum|w| * scale * |g| lambda.
    double weight_sum = 0.0;
    for (double w : stencil.weights) weight_sum += std::abs(w);
    const double mass = integral([&](double t) { return std::abs(g(t)) * model.lambda(theta, t); }, window, tol);
    const double floor = 1e3 * std::numeric_limits<double>::epsilon() * weight_sum * scale * mass;
    return integral(
        [&](double t) {
            double acc = 0.0;
            for (int j = 0; j < 7; ++j) {
                const double w = stencil.weights[static_cast<std::size_t>(j)];
                if (w != 0.0) acc += w * model.lambda(theta + (j - 3) * h, t);
            }
            return g(t) * acc * scale;
        },
        window, std::max(tol, floor));
}

double MomentMap::oriented_integral(double theta, int order) const {
    return orientation_ * raw_moment_derivative(*model_, weight_, theta, order, options_.quadrature_tol);
}

double MomentMap::m(double theta) const { return oriented_integral(theta, 0); }

double MomentMap::derivative(double theta, int order) const {
    if (order < 0 || order > 3) throw ArgumentError("moment map: derivative order must be in 0..3");
    return oriented_integral(theta, order);
}

MomentMap moment_map(ModelPtr model, WeightFunction weight, MomentMapOptions options) {
    return MomentMap(std::move(model), std::move(weight), options);
}

AmCoefficients am_coefficients(const MomentMap& map, double theta0) {
    const auto& th = map.model().theta_interval();
    if (!(theta0 > th.lo && theta0 < th.hi)) {
        std::ostringstream os;
        os << "am_coefficients: theta0 = " << theta0 << " outside (" << th.lo << ", " << th.hi << ")";
        throw ArgumentError(os.str());
    }
    const auto& model = map.model();
    const double tol = map.quadrature_tol();
    auto moment = [&](int power) {
        return integral(
            [&](double t) { return std::pow(map.weight(t), power) * model.lambda(theta0, t); },
            model.window(), tol);
    };
    AmCoefficients am;
    am.theta0 = theta0;
    am.a2 = moment(2);
    if (!(am.a2 > tol)) {
        std::ostringstream os;
        os << "am_coefficients: a2 = " << am.a2 << " vanishes (g is zero almost everywhere under lambda)";
        throw DegenerateWeightError(os.str());
    }
    am.a3 = moment(3);
    am.a4 = moment(4);
    am.ahat3 = am.a3 / std::pow(am.a2, 1.5);
    am.ahat4 = am.a4 / (am.a2 * am.a2);
    return am;
}

} // namespace pmme
