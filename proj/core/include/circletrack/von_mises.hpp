#pragma once

#include "circletrack/angle.hpp"
#include "circletrack/rng.hpp"

namespace circletrack {

/// Von Mises density on the circle. Concentration 0 encodes the uniform
/// density, in which case the mean carries no information.
struct VonMises {
    Angle mean;
    double concentration = 0.0;  // >= 0, clamped to kKappaMax

    VonMises() = default;
    VonMises(Angle mean_angle, double kappa);
};

/// Log-density of the angle x under d. Uniform case returns -log(2 pi).
double vm_log_pdf(Angle x, const VonMises& d);

/// Pointwise product of two von Mises densities, renormalized; the family is
/// closed under multiplication. On near-total antipodal cancellation
/// (resultant below kEpsKappa) the mean defaults to a's mean.
VonMises vm_multiply(const VonMises& a, const VonMises& b);

/// One step of the transition convolution in the von Mises approximation:
/// the mean is unchanged and the concentration shrinks to
/// A^-1[A(lambda) A(kappa_z)].
VonMises vm_convolve_approx(const VonMises& state, double kappa_z);

/// n steps of vm_convolve_approx collapsed into one inversion; the resultant
/// shrinks geometrically, A^-1[A(lambda) A(kappa_z)^n].
VonMises vm_convolve_approx_n(const VonMises& state, double kappa_z, long n);

/// Exact log-density of an observation at angle x with concentration
/// obs_conc, marginalized over a von Mises state: the convolution of the two
/// densities evaluated at x. With a uniform state this is -log(2 pi).
double vm_exact_conv_log_density(Angle x, double obs_conc, const VonMises& state);

/// One draw from d. Best-Fisher rejection sampling; deterministic given the
/// stream state.
Angle vm_sample(const VonMises& d, Rng& rng);

}  // namespace circletrack
