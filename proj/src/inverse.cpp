#include "pmme/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pmme {

InverseMap::InverseMap(MomentMap map, double root_tol) : map_(std::move(map)), root_tol_(root_tol) {
    if (!(root_tol_ > 0.0)) throw ConfigurationError("inverse map: root_tol must be > 0");
    const auto& th = map_.model().theta_interval();
    range_ = {map_.m(th.lo), map_.m(th.hi)};
}

double InverseMap::invert(double y) const {
    if (!(y >= range_.lo && y <= range_.hi)) {
        std::ostringstream os;
        os.precision(17);
        os << "invert: y = " << y << " outside the range [" << range_.lo << ", " << range_.hi << "] of m";
        throw OutOfRangeError(os.str());
    }
    const auto& th = map_.model().theta_interval();
    if (y == range_.lo) return th.lo;
    if (y == range_.hi) return th.hi;

    double lo = th.lo;
    double hi = th.hi;
    const double target_tol = root_tol_ * std::max(1.0, std::abs(y));
    double theta = lo + (y - range_.lo) / (range_.hi - range_.lo) * (hi - lo);
    double step_before_last = hi - lo;
    double last_step = hi - lo;

    for (int iter = 0; iter < 300; ++iter) {
        const double f = map_.m(theta) - y;
        if (std::abs(f) <= target_tol) return theta;
        if (f < 0.0) {
            lo = theta;
        } else {
            hi = theta;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(theta))) {
            return theta;
        }
        const double slope = map_.derivative(theta, 1);
        const double newton = slope > 0.0 ? theta - f / slope : std::numeric_limits<double>::quiet_NaN();
        double next;
        if (std::isfinite(newton) && newton > lo && newton < hi &&
            std::abs(newton - theta) < 0.5 * step_before_last) {
            next = newton;
        } else {
            next = 0.5 * (lo + hi);
        }
        step_before_last = last_step;
        last_step = std::abs(next - theta);
        theta = next;
    }
    return theta;
}

double InverseMap::derivative_at(double theta, int order) const {
    if (order < 1 || order > 4) throw ArgumentError("inverse map: derivative order must be in 1..4");
    const double d1 = map_.derivative(theta, 1);
    if (!(std::abs(d1) > kSingularSlope)) {
        std::ostringstream os;
        os << "inverse map: m'(" << theta << ") = " << d1 << " vanishes; G is singular there";
        throw SingularMapError(os.str());
    }
    if (order == 1) return 1.0 / d1;
    const double d2 = map_.derivative(theta, 2);
    if (order == 2) return -d2 / (d1 * d1 * d1);
    if (order == 3) {
        const double d3 = map_.derivative(theta, 3);
        return (3.0 * d2 * d2 - d1 * d3) / std::pow(d1, 5);
    }
    // dG'''/dy = (d/dtheta G'''(m(theta))) / m'(theta)
    const double h = 1e-3 * std::max(1.0, std::abs(theta));
    auto g3 = [&](double th) { return derivative_at(th, 3); };
    const double slope = (-g3(theta + 2 * h) + 8 * g3(theta + h) - 8 * g3(theta - h) + g3(theta - 2 * h)) / (12 * h);
    return slope / d1;
}

double InverseMap::sup_abs_derivative(int order, double theta0, double delta, int points) const {
    if (points < 2) throw ConfigurationError("sup_abs_derivative: need at least 2 grid points");
    const auto& th = map_.model().theta_interval();
    const double lo = std::max(th.lo, theta0 - delta);
    const double hi = std::min(th.hi, theta0 + delta);
    double best = 0.0;
    for (int i = 0; i < points; ++i) {
        const double theta = lo + (hi - lo) * i / (points - 1);
        best = std::max(best, std::abs(derivative_at(theta, order)));
    }
    return best;
}

InverseDerivatives InverseMap::derivatives_at(double theta0) const {
    const double d1 = map_.derivative(theta0, 1);
    if (!(std::abs(d1) > kSingularSlope)) {
        std::ostringstream os;
        os << "inverse derivatives: m'(" << theta0 << ") = " << d1 << " vanishes";
        throw SingularMapError(os.str());
    }
    const double d2 = map_.derivative(theta0, 2);
    const double d3 = map_.derivative(theta0, 3);
    InverseDerivatives out;
    out.d1 = 1.0 / d1;
    out.d2 = -d2 / (d1 * d1 * d1);
    out.d3 = (3.0 * d2 * d2 - d1 * d3) / std::pow(d1, 5);
    return out;
}

InverseDerivatives inverse_derivatives(const InverseMap& inv, double theta0) {
    return inv.derivatives_at(theta0);
}

PsiCoefficients psi_coefficients(const InverseMap& inv, double theta0, int k) {
    if (k < 1 || k > 3) throw ArgumentError("psi_coefficients: expansion order k must be in 1..3");
    const auto d = inv.derivatives_at(theta0);
    PsiCoefficients psi;
    psi.theta0 = theta0;
    psi.k = k;
    psi.psi1 = d.d1;
    psi.psi2 = d.d2 / 2.0;
    psi.psi3 = d.d3 / 6.0;
    return psi;
}

} // namespace pmme
