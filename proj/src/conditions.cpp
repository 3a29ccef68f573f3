#include "pmme/conditions.hpp"

#include "pmme/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pmme {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Second-order central difference of order `order` applied to lambda inside the integral.
double fd_moment_derivative(const IntensityModel& model, const WeightFunction& g, double theta, int order, double h,
                            double tol) {
    return integral(
        [&](double t) {
            double acc = 0.0;
            for (int i = 0; i <= order; ++i) {
                const double sign = (i % 2 == 0) ? 1.0 : -1.0;
                acc += sign * binomial(order, i) * model.lambda(theta + (0.5 * order - i) * h, t);
            }
            return g(t) * acc;
        },
        model.window(), tol) /
           std::pow(h, order);
}

} // namespace

ConditionReport check_conditions(const IntensityModel& model, const WeightFunction& g, int max_m,
                                 const ConditionGrid& grid) {
    if (max_m < 4) throw ConfigurationError("check_conditions: max_m must be >= 4");
    if (grid.theta_points < 2 || grid.v_points < 1 || !(grid.v_max > 0.0) || !(grid.cramer_b > 0.0) ||
        grid.k < 1 || !(grid.quadrature_tol > 0.0) || !(grid.smoothness_tol > 0.0)) {
        throw ConfigurationError("check_conditions: degenerate grid specification");
    }
    ConditionReport report;
    const auto& th = model.theta_interval();
    const double tol = grid.quadrature_tol;
    auto theta_at = [&](int i) { return th.lo + th.length() * i / (grid.theta_points - 1); };

    // Finite weighted moments of |g|.
    report.weight_moments.assign(static_cast<std::size_t>(max_m), 0.0);
    for (int m = 1; m <= max_m; ++m) {
        double sup = 0.0;
        for (int i = 0; i < grid.theta_points; ++i) {
            const double theta = theta_at(i);
            double value;
            try {
                value = integral([&](double t) { return std::pow(std::abs(g(t)), m) * model.lambda(theta, t); },
                                 model.window(), tol);
            } catch (const QuadratureError&) {
                value = std::numeric_limits<double>::infinity();
            }
            sup = std::max(sup, value);
        }
        report.weight_moments[static_cast<std::size_t>(m - 1)] = sup;
        if (!std::isfinite(sup)) {
            report.moments_pass = false;
            report.failures.push_back("integral of |g|^" + std::to_string(m) + " lambda is not finite");
        }
    }

    // Monotonicity and kappa = inf |m'|.
    report.kappa = std::numeric_limits<double>::infinity();
    int sign = 0;
    for (int i = 0; i < grid.theta_points; ++i) {
        const double theta = theta_at(i);
        double slope;
        try {
            slope = raw_moment_derivative(model, g, theta, 1, tol);
        } catch (const QuadratureError&) {
            slope = std::numeric_limits<double>::quiet_NaN();
        }
        if (!std::isfinite(slope)) {
            report.monotone_pass = false;
            report.failures.push_back("m' is not finite on the theta grid");
            break;
        }
        const int s = slope > 0.0 ? 1 : (slope < 0.0 ? -1 : 0);
        if (s == 0 || (sign != 0 && s != sign)) {
            report.monotone_pass = false;
            std::ostringstream os;
            os << "m' changes sign or vanishes near theta = " << theta;
            report.failures.push_back(os.str());
        }
        if (s != 0) sign = s;
        report.kappa = std::min(report.kappa, std::abs(slope));
    }
    report.orientation = report.monotone_pass ? sign : 0;
    if (report.monotone_pass && !(report.kappa > 0.0)) {
        report.monotone_pass = false;
        report.failures.push_back("kappa = inf |m'| is zero");
    }

    // Smoothness proxy: derivatives up to order k + 2 stable under step halving.
    // Differences below the propagated quadrature noise count as agreement,
    // which covers derivatives that vanish identically.
    const int max_order = grid.k + 2;
    const double h = 0.01 * std::max(1.0, std::max(std::abs(th.lo), std::abs(th.hi)));
    const double margin = 0.5 * max_order * h;
    const double probe_tol = std::min(tol, 1e-12);
    report.smoothness_change.assign(static_cast<std::size_t>(max_order), 0.0);
    if (th.length() > 2.0 * margin) {
        double m_scale = 0.0;
        for (int i = 0; i < grid.theta_points; ++i) {
            m_scale = std::max(m_scale, std::abs(raw_moment_derivative(model, g, theta_at(i), 0, probe_tol)));
        }
        const double noise = probe_tol + 1e3 * std::numeric_limits<double>::epsilon() * m_scale;
        for (int order = 1; order <= max_order; ++order) {
            const double floor = 10.0 * std::pow(2.0, order) * noise / std::pow(0.5 * h, order);
            double worst = 0.0;
            for (int i = 0; i < grid.theta_points; ++i) {
                const double theta = th.lo + margin + (th.length() - 2.0 * margin) * i / (grid.theta_points - 1);
                double change;
                try {
                    const double coarse = fd_moment_derivative(model, g, theta, order, h, probe_tol);
                    const double fine = fd_moment_derivative(model, g, theta, order, 0.5 * h, probe_tol);
                    const double gap = std::abs(coarse - fine);
                    change = gap <= floor ? 0.0 : gap / std::abs(fine);
                } catch (const QuadratureError&) {
                    change = std::numeric_limits<double>::infinity();
                }
                worst = std::isfinite(change) ? std::max(worst, change) : std::numeric_limits<double>::infinity();
            }
            report.smoothness_change[static_cast<std::size_t>(order - 1)] = worst;
            if (!(worst <= grid.smoothness_tol)) {
                report.smoothness_pass = false;
                std::ostringstream os;
                os << "derivative of order " << order << " unstable under step refinement (relative change "
                   << worst << ")";
                report.failures.push_back(os.str());
            }
        }
    } else {
        report.smoothness_pass = false;
        report.failures.push_back("theta interval too short for the smoothness probe");
    }

    // Cramer-type condition on |v| > 1 / (a2 b) at theta0; the integrand is even in v.
    const double theta0 = grid.theta0.value_or(0.5 * (th.lo + th.hi));
    report.cramer_theta0 = theta0;
    const double a2 = integral([&](double t) { return g(t) * g(t) * model.lambda(theta0, t); }, model.window(), tol);
    report.cramer_min = std::numeric_limits<double>::infinity();
    if (a2 > 0.0) {
        const double v_min = 1.0 / (a2 * grid.cramer_b);
        if (v_min < grid.v_max) {
            for (int i = 0; i < grid.v_points; ++i) {
                const double v = v_min + (grid.v_max - v_min) * (i + 1) / grid.v_points;
                const double value = integral(
                    [&](double t) {
                        const double s = std::sin(v * g(t));
                        return s * s * model.lambda(theta0, t);
                    },
                    model.window(), tol);
                if (value < report.cramer_min) {
                    report.cramer_min = value;
                    report.cramer_argmin_v = v;
                }
            }
        }
    } else {
        report.cramer_min = 0.0;
    }
    if (!(report.cramer_min > 1e-12)) {
        report.cramer_pass = false;
        std::ostringstream os;
        os << "Cramer-type integral vanishes (" << report.cramer_min << " at v = " << report.cramer_argmin_v << ")";
        report.failures.push_back(os.str());
    }
    return report;
}

} // namespace pmme
