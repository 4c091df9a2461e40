#include "circletrack/von_mises.hpp"

#include <cmath>
#include <stdexcept>

#include "circletrack/bessel.hpp"

namespace circletrack {

VonMises::VonMises(Angle mean_angle, double kappa) : mean(mean_angle) {
    if (!(kappa >= 0.0)) {
        throw std::domain_error("VonMises: concentration must be >= 0");
    }
    concentration = std::min(kappa, kKappaMax);
}

double vm_log_pdf(Angle x, const VonMises& d) {
    return d.concentration * std::cos(signed_difference(x, d.mean)) - kLogTwoPi -
           log_bessel_i0(d.concentration);
}

namespace {

// Resultant of two concentration vectors separated by delta radians.
double resultant_length(double la, double lb, double delta) {
    const double sq = la * la + lb * lb + 2.0 * la * lb * std::cos(delta);
    return std::sqrt(std::max(sq, 0.0));
}

}  // namespace

VonMises vm_multiply(const VonMises& a, const VonMises& b) {
    const double la = a.concentration;
    const double lb = b.concentration;
    const double kappa = resultant_length(la, lb, signed_difference(a.mean, b.mean));
    if (kappa < kEpsKappa) {
        return VonMises(a.mean, kappa);
    }
    const double y = la * std::sin(a.mean.radians()) + lb * std::sin(b.mean.radians());
    const double x = la * std::cos(a.mean.radians()) + lb * std::cos(b.mean.radians());
    return VonMises(Angle(std::atan2(y, x)), kappa);
}

VonMises vm_convolve_approx(const VonMises& state, double kappa_z) {
    return vm_convolve_approx_n(state, kappa_z, 1);
}

VonMises vm_convolve_approx_n(const VonMises& state, double kappa_z, long n) {
    if (n < 0) {
        throw std::invalid_argument("vm_convolve_approx_n: n must be >= 0");
    }
    if (n == 0 || state.concentration == 0.0) {
        return VonMises(state.mean, n == 0 ? state.concentration : 0.0);
    }
    const double r = bessel_ratio(state.concentration) *
                     std::pow(bessel_ratio(std::min(kappa_z, kKappaMax)), static_cast<double>(n));
    return VonMises(state.mean, inv_bessel_ratio(r));
}

double vm_exact_conv_log_density(Angle x, double obs_conc, const VonMises& state) {
    if (!(obs_conc >= 0.0)) {
        throw std::domain_error("vm_exact_conv_log_density: obs_conc must be >= 0");
    }
    const double kappa = std::min(obs_conc, kKappaMax);
    const double lambda = state.concentration;
    const double resultant = resultant_length(kappa, lambda, signed_difference(x, state.mean));
    return log_bessel_i0(resultant) - kLogTwoPi - log_bessel_i0(kappa) - log_bessel_i0(lambda);
}

Angle vm_sample(const VonMises& d, Rng& rng) {
    const double kappa = d.concentration;
    if (kappa < kEpsKappa) {
        return Angle(rng.uniform(-std::numbers::pi, std::numbers::pi));
    }
    // Best & Fisher rejection envelope via a wrapped Cauchy.
    const double a = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double b = (a - std::sqrt(2.0 * a)) / (2.0 * kappa);
    const double r = (1.0 + b * b) / (2.0 * b);
    for (;;) {
        const double u1 = rng.uniform();
        const double u2 = rng.uniform();
        const double z = std::cos(std::numbers::pi * u1);
        const double f = (1.0 + r * z) / (r + z);
        const double c = kappa * (r - f);
        if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
            const double u3 = rng.uniform();
            const double offset = (u3 < 0.5 ? -1.0 : 1.0) * std::acos(std::clamp(f, -1.0, 1.0));
            return Angle(d.mean.radians() + offset);
        }
    }
}

}  // namespace circletrack
