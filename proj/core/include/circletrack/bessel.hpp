#pragma once

namespace circletrack {

/// Upper clamp applied to every concentration parameter. Keeps the inverse
/// Bessel ratio finite when its argument approaches 1.
inline constexpr double kKappaMax = 1e6;

/// Resultant concentrations below this are treated as exactly uniform, with
/// the mean pinned by the caller's convention.
inline constexpr double kEpsKappa = 1e-12;

/// log I0(kappa), evaluated without overflow for any kappa >= 0.
/// Power series below kappa = 15, log-scale asymptotic expansion beyond.
double log_bessel_i0(double kappa);

/// A(kappa) = I1(kappa) / I0(kappa), the mean resultant length of a von Mises
/// density with concentration kappa. Monotone increasing, in [0, 1).
double bessel_ratio(double kappa);

/// Functional inverse of bessel_ratio, solved by Newton-Raphson on the
/// r-residual to 1e-12, capped at 50 iterations. Result clamped to
/// [0, kKappaMax]. Throws std::domain_error for r outside [0, 1).
double inv_bessel_ratio(double r);

}  // namespace circletrack
