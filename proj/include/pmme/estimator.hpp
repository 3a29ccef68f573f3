#pragma once

#include "pmme/intensity.hpp"
#include "pmme/inverse.hpp"

#include <string>

namespace pmme {

enum class Clamp { none, lower, upper };

[[nodiscard]] std::string to_string(Clamp c);

struct MmeResult {
    double theta_hat{0.0};
    Clamp clamped{Clamp::none};
    double mbar{0.0};
};

/// Method-of-moments estimate for an (oriented) empirical moment mbar:
/// alpha when mbar <= m(alpha), beta when mbar >= m(beta), G(mbar) otherwise.
/// Boundary ties take the clamped branch. Total on the extended reals; NaN
/// is rejected.
[[nodiscard]] MmeResult mme_estimate(const InverseMap& inv, double mbar);

enum class ClosedForm { amplitude, exp_decay, gaussian_g1, gaussian_g2, periodic_sine };

[[nodiscard]] ClosedForm parse_closed_form(const std::string& name);

/// Model constants entering the explicit estimators.
struct ClosedFormConstants {
    double H_g{1.0};     // amplitude: integral of g h
    double G{0.0};       // amplitude: integral of g
    double lambda0{0.0}; // amplitude
    double R{0.0};       // exp_decay: integral of g q
    double a{1.0};       // gaussian amplitude
};

/// Explicit MME formulas, unclamped, in the user's (raw) sign of g:
///   amplitude      (mbar - lambda0 G) / H_g
///   exp_decay      1 / (mbar - R)
///   gaussian_g1    (mbar / (a sqrt(2 pi)))^{1/3}
///   gaussian_g2    (mbar / (2 a))^{1/2}
///   periodic_sine  arcsin(mbar)
/// Throws FormulaDomainError outside each formula's domain.
[[nodiscard]] double closed_form_mme(ClosedForm form, double mbar, const ClosedFormConstants& k = {});

struct ClosedFormModel {
    ClosedForm form;
    ClosedFormConstants constants;
};

/// Closed form and its constants for a builtin with resolved parameters.
/// Amplitude and gaussian constants are analytic; R for exp_decay is a
/// quadrature over the truncated window at `tol`.
[[nodiscard]] ClosedFormModel closed_form_for_builtin(Builtin b, const BuiltinParams& params,
                                                      double tol = kDefaultQuadratureTol);

} // namespace pmme
