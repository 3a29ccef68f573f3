#include "pmme/estimator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace pmme {

std::string to_string(Clamp c) {
    switch (c) {
    case Clamp::none: return "none";
    case Clamp::lower: return "lower";
    case Clamp::upper: return "upper";
    }
    return "none";
}

MmeResult mme_estimate(const InverseMap& inv, double mbar) {
    if (std::isnan(mbar)) throw ArgumentError("mme_estimate: mbar is NaN");
    const auto& th = inv.map().model().theta_interval();
    const auto& range = inv.range();
    if (mbar <= range.lo) return {th.lo, Clamp::lower, mbar};
    if (mbar >= range.hi) return {th.hi, Clamp::upper, mbar};
    return {inv.invert(mbar), Clamp::none, mbar};
}

ClosedForm parse_closed_form(const std::string& name) {
    if (name == "amplitude") return ClosedForm::amplitude;
    if (name == "exp_decay") return ClosedForm::exp_decay;
    if (name == "gaussian_g1") return ClosedForm::gaussian_g1;
    if (name == "gaussian_g2") return ClosedForm::gaussian_g2;
    if (name == "periodic_sine") return ClosedForm::periodic_sine;
    throw CatalogError("unknown closed form '" + name + "'");
}

namespace {

[[noreturn]] void domain_error(const char* form, double mbar, const char* why) {
    std::ostringstream os;
    os.precision(17);
    os << "closed_form_mme(" << form << "): mbar = " << mbar << " " << why;
    throw FormulaDomainError(os.str());
}

} // namespace

double closed_form_mme(ClosedForm form, double mbar, const ClosedFormConstants& k) {
    if (!std::isfinite(mbar)) domain_error("any", mbar, "is not finite");
    switch (form) {
    case ClosedForm::amplitude:
        if (k.H_g == 0.0) domain_error("amplitude", mbar, "with H_g = 0");
        return (mbar - k.lambda0 * k.G) / k.H_g;
    case ClosedForm::exp_decay:
        if (!(mbar > k.R)) domain_error("exp_decay", mbar, "must exceed R");
        return 1.0 / (mbar - k.R);
    case ClosedForm::gaussian_g1:
        if (mbar < 0.0) domain_error("gaussian_g1", mbar, "must be >= 0");
        return std::cbrt(mbar / (k.a * std::sqrt(2.0 * std::numbers::pi)));
    case ClosedForm::gaussian_g2:
        if (mbar < 0.0) domain_error("gaussian_g2", mbar, "must be >= 0");
        return std::sqrt(mbar / (2.0 * k.a));
    case ClosedForm::periodic_sine:
        if (mbar < -1.0 || mbar > 1.0) domain_error("periodic_sine", mbar, "must lie in [-1, 1]");
        return std::asin(mbar);
    }
    throw CatalogError("unknown closed form");
}

ClosedFormModel closed_form_for_builtin(Builtin b, const BuiltinParams& overrides, double tol) {
    const auto p = resolve_builtin_params(b, overrides);
    ClosedFormModel out{ClosedForm::periodic_sine, {}};
    switch (b) {
    case Builtin::amplitude: {
        const double tau = p.at("tau");
        const double h_mod = p.at("h_mod");
        out.form = ClosedForm::amplitude;
        out.constants.lambda0 = p.at("lambda0");
        if (p.at("g_is_h") != 0.0) {
            // g = h: integral h^2 = tau (1 + h_mod^2 / 2), integral h = tau.
            out.constants.H_g = tau * (1.0 + 0.5 * h_mod * h_mod);
            out.constants.G = tau;
        } else {
            out.constants.H_g = tau;
            out.constants.G = tau;
        }
        break;
    }
    case Builtin::exp_decay: {
        const double q0 = p.at("q0");
        out.form = ClosedForm::exp_decay;
        out.constants.R = integral(
            [&](double t) { return 2.0 * t / (1.0 + t * t * t * t) * q0 * std::exp(-t); },
            Interval{0.0, p.at("truncation")}, tol);
        break;
    }
    case Builtin::gaussian:
        out.form = p.at("g_power") == 2.0 ? ClosedForm::gaussian_g1 : ClosedForm::gaussian_g2;
        out.constants.a = p.at("a");
        break;
    case Builtin::periodic_sine:
        out.form = ClosedForm::periodic_sine;
        break;
    }
    return out;
}

} // namespace pmme
