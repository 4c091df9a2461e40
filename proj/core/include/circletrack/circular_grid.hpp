#pragma once

#include <span>
#include <vector>

namespace circletrack {

/// Uniform quadrature grid over the circle, bin centers at
/// -pi + (i + 0.5) * 2pi / n.
struct CircularGrid {
    explicit CircularGrid(int n_bins);

    int n;
    double delta;
    std::vector<double> angles;
    std::vector<double> cos_angles;
    std::vector<double> sin_angles;
};

/// Circulant convolution by the discretized von Mises transition kernel,
/// applied through the kernel's Fourier eigenvalues. Exact for the discrete
/// kernel up to a 1e-16 eigenvalue cutoff, and much cheaper than the dense
/// O(n^2) product when the kernel is smooth.
///
/// The projection onto the retained modes is exposed so that callers can
/// reuse it: the forward-backward pass needs each filtered mass both
/// convolved and dotted against kernel-weighted vectors, and both come from
/// the same coefficients. pair_moments evaluates, via Parseval,
///   sum_j u_j (k (*) w)_j       and   sum_j u_j ((k cos) (*) w)_j,
/// the two ingredients of the transition statistic E[cos(z_{t+1} - z_t)].
class TransitionConvolver {
public:
    TransitionConvolver(const CircularGrid& grid, double kappa_z);

    /// Highest retained mode index; coefficient spans have mode_count()+1
    /// entries.
    int mode_count() const { return modes_; }

    void project(std::span<const double> in, std::span<double> c, std::span<double> s) const;

    /// out = k (*) in, reconstructed from the coefficients of in.
    void convolve_projected(std::span<const double> c, std::span<const double> s,
                            std::span<double> out) const;

    /// Convenience: project + convolve_projected.
    void convolve(std::span<const double> in, std::span<double> out) const;

    struct PairMoments {
        double plain = 0.0;   // sum_j u_j (k (*) w)_j
        double cosine = 0.0;  // sum_j u_j ((k cos) (*) w)_j
    };
    PairMoments pair_moments(std::span<const double> cu, std::span<const double> su,
                             std::span<const double> cw, std::span<const double> sw) const;

    const std::vector<double>& kernel() const { return kernel_; }

private:
    const CircularGrid* grid_;
    int modes_;
    std::vector<double> kernel_;
    std::vector<double> mult_plain_;   // eigenvalues of k
    std::vector<double> mult_cosine_;  // eigenvalues of k cos
    std::vector<double> mode_weight_;  // 1/n, 2/n, ..., Nyquist 1/n
    std::vector<double> mode_cos_;     // [m * n + j] = cos(m * angle_j)
    std::vector<double> mode_sin_;
};

}  // namespace circletrack
