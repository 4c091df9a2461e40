#include "circletrack/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace circletrack {

namespace {

constexpr double kSeriesCutoff = 15.0;

// I0 by its ascending power series; all terms positive, no cancellation.
// Safe in double up to the cutoff (I0(15) ~ 3.4e5).
double i0_series(double kappa) {
    const double q = kappa * kappa / 4.0;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 200; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum;
}

// I1 by its ascending power series.
double i1_series(double kappa) {
    const double q = kappa * kappa / 4.0;
    double term = kappa / 2.0;
    double sum = term;
    for (int k = 1; k <= 200; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum;
}

// Bracket of the large-argument expansion
//   I_nu(z) ~ e^z / sqrt(2 pi z) * bracket(z),
// with mu = 4 nu^2 and terms t_k = t_{k-1} * -(mu - (2k-1)^2) / (8 k z).
// Truncated at the smallest term; at z >= 15 that is below 1e-13 relative.
double asymptotic_bracket(double z, double mu) {
    double term = 1.0;
    double sum = 1.0;
    double prev_abs = 1.0;
    for (int k = 1; k <= 30; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * k * z);
        if (std::fabs(term) >= prev_abs) break;  // divergent tail reached
        sum += term;
        prev_abs = std::fabs(term);
        if (prev_abs < 1e-18 * std::fabs(sum)) break;
    }
    return sum;
}

}  // namespace

double log_bessel_i0(double kappa) {
    if (!(kappa >= 0.0)) {
        throw std::domain_error("log_bessel_i0: kappa must be >= 0");
    }
    if (kappa < kSeriesCutoff) {
        return std::log(i0_series(kappa));
    }
    const double bracket = asymptotic_bracket(kappa, 0.0);
    return kappa - 0.5 * std::log(2.0 * std::numbers::pi * kappa) + std::log(bracket);
}

double bessel_ratio(double kappa) {
    if (!(kappa >= 0.0)) {
        throw std::domain_error("bessel_ratio: kappa must be >= 0");
    }
    if (kappa == 0.0) return 0.0;
    double r;
    if (kappa < kSeriesCutoff) {
        r = i1_series(kappa) / i0_series(kappa);
    } else {
        r = asymptotic_bracket(kappa, 4.0) / asymptotic_bracket(kappa, 0.0);
    }
    if (r < 0.0) r = 0.0;
    if (r >= 1.0) r = std::nextafter(1.0, 0.0);
    return r;
}

double inv_bessel_ratio(double r) {
    if (!(r >= 0.0) || r >= 1.0) {
        throw std::domain_error("inv_bessel_ratio: r must lie in [0, 1)");
    }
    if (r == 0.0) return 0.0;
    if (r >= bessel_ratio(kKappaMax)) return kKappaMax;

    // Piecewise initial guess: 2r + r^3 near zero, 1/(2(1-r)) near one.
    double kappa = (r < 0.6) ? (2.0 * r + r * r * r) : (1.0 / (2.0 * (1.0 - r)));
    if (kappa > kKappaMax) kappa = kKappaMax;

    const double tol = 1e-12;
    for (int iter = 0; iter < 50; ++iter) {
        const double a = bessel_ratio(kappa);
        const double residual = a - r;
        if (std::fabs(residual) <= tol) break;
        // dA/dkappa = 1 - A^2 - A/kappa, with limit 1/2 at kappa -> 0.
        double deriv = (kappa < 1e-8) ? 0.5 : (1.0 - a * a - a / kappa);
        if (deriv < 1e-300) deriv = 1e-300;
        kappa -= residual / deriv;
        if (kappa < 0.0) kappa = 0.0;
        if (kappa > kKappaMax) kappa = kKappaMax;
    }
    return kappa;
}

}  // namespace circletrack
