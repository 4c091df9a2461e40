#include "circletrack/circular_grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "circletrack/angle.hpp"
#include "circletrack/bessel.hpp"

namespace circletrack {

CircularGrid::CircularGrid(int n_bins) : n(n_bins), delta(kTwoPi / n_bins) {
    if (n_bins < 2) {
        throw std::invalid_argument("CircularGrid: need at least 2 bins");
    }
    angles.reserve(n);
    cos_angles.reserve(n);
    sin_angles.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double a = -std::numbers::pi + (i + 0.5) * delta;
        angles.push_back(a);
        cos_angles.push_back(std::cos(a));
        sin_angles.push_back(std::sin(a));
    }
}

TransitionConvolver::TransitionConvolver(const CircularGrid& grid, double kappa_z)
    : grid_(&grid) {
    const int n = grid.n;
    const double kz = std::min(std::max(kappa_z, 0.0), kKappaMax);

    // Transition masses over circular displacement, normalized to sum 1.
    kernel_.resize(n);
    double total = 0.0;
    for (int d = 0; d < n; ++d) {
        kernel_[d] = std::exp(kz * (std::cos(grid.delta * d) - 1.0));
        total += kernel_[d];
    }
    for (double& v : kernel_) v /= total;

    // Eigenvalues rho_m = sum_d k_d cos(m delta d); the sine parts vanish by
    // kernel symmetry. The cosine-weighted kernel shares the machinery.
    const int nyquist = n / 2;
    mult_plain_.resize(nyquist + 1);
    mult_cosine_.resize(nyquist + 1);
    for (int m = 0; m <= nyquist; ++m) {
        double mk = 0.0;
        double mc = 0.0;
        for (int d = 0; d < n; ++d) {
            const double c = std::cos(m * grid.delta * d);
            mk += kernel_[d] * c;
            mc += kernel_[d] * std::cos(grid.delta * d) * c;
        }
        mult_plain_[m] = mk;
        mult_cosine_[m] = mc;
    }

    // The numerically summed eigenvalues bottom out at roundoff noise around
    // 1e-15, so truncate against a 1e-12 floor; the per-convolution error
    // that introduces is of the same order.
    modes_ = nyquist;
    while (modes_ > 1 && std::fabs(mult_plain_[modes_]) < 1e-12 &&
           std::fabs(mult_cosine_[modes_]) < 1e-12 &&
           std::fabs(mult_plain_[modes_ - 1]) < 1e-12 &&
           std::fabs(mult_cosine_[modes_ - 1]) < 1e-12) {
        --modes_;
    }
    for (int m = modes_ + 1; m <= nyquist; ++m) {
        mult_plain_[m] = 0.0;
        mult_cosine_[m] = 0.0;
    }

    // The Nyquist pair is linearly dependent (both tables alternate in
    // sign), so it reconstructs with weight 1/n instead of 2/n.
    mode_weight_.resize(modes_ + 1);
    for (int m = 0; m <= modes_; ++m) {
        const bool nyquist_mode = (n % 2 == 0 && m == nyquist);
        mode_weight_[m] = (m == 0 || nyquist_mode) ? 1.0 / n : 2.0 / n;
    }

    mode_cos_.resize(static_cast<std::size_t>(modes_ + 1) * n);
    mode_sin_.resize(static_cast<std::size_t>(modes_ + 1) * n);
    for (int m = 0; m <= modes_; ++m) {
        for (int j = 0; j < n; ++j) {
            mode_cos_[static_cast<std::size_t>(m) * n + j] = std::cos(m * grid.angles[j]);
            mode_sin_[static_cast<std::size_t>(m) * n + j] = std::sin(m * grid.angles[j]);
        }
    }
}

void TransitionConvolver::project(std::span<const double> in, std::span<double> c,
                                  std::span<double> s) const {
    const int n = grid_->n;
    for (int m = 0; m <= modes_; ++m) {
        const double* mc = &mode_cos_[static_cast<std::size_t>(m) * n];
        const double* ms = &mode_sin_[static_cast<std::size_t>(m) * n];
        double cm = 0.0;
        double sm = 0.0;
        for (int j = 0; j < n; ++j) {
            cm += in[j] * mc[j];
            sm += in[j] * ms[j];
        }
        c[m] = cm;
        s[m] = sm;
    }
}

void TransitionConvolver::convolve_projected(std::span<const double> c,
                                             std::span<const double> s,
                                             std::span<double> out) const {
    const int n = grid_->n;
    for (int j = 0; j < n; ++j) out[j] = mode_weight_[0] * mult_plain_[0] * c[0];
    for (int m = 1; m <= modes_; ++m) {
        const double wc = mode_weight_[m] * mult_plain_[m] * c[m];
        const double ws = mode_weight_[m] * mult_plain_[m] * s[m];
        if (wc == 0.0 && ws == 0.0) continue;
        const double* mc = &mode_cos_[static_cast<std::size_t>(m) * n];
        const double* ms = &mode_sin_[static_cast<std::size_t>(m) * n];
        for (int j = 0; j < n; ++j) {
            out[j] += wc * mc[j] + ws * ms[j];
        }
    }
}

void TransitionConvolver::convolve(std::span<const double> in, std::span<double> out) const {
    std::vector<double> c(modes_ + 1);
    std::vector<double> s(modes_ + 1);
    project(in, c, s);
    convolve_projected(c, s, out);
}

TransitionConvolver::PairMoments TransitionConvolver::pair_moments(
    std::span<const double> cu, std::span<const double> su, std::span<const double> cw,
    std::span<const double> sw) const {
    PairMoments moments;
    for (int m = 0; m <= modes_; ++m) {
        const double cross = mode_weight_[m] * (cu[m] * cw[m] + su[m] * sw[m]);
        moments.plain += mult_plain_[m] * cross;
        moments.cosine += mult_cosine_[m] * cross;
    }
    return moments;
}

}  // namespace circletrack
