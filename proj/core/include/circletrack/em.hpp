#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "circletrack/tracker.hpp"

namespace circletrack {

/// Raised by fit when no input sequence carries enough observations.
struct NoUsableSequenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmConfig {
    // The EM map contracts slowly when the initial concentrations are far
    // off, so the default iteration budget is generous and the stopping rule
    // does the real work.
    int max_iters = 50;
    int grid_size = 720;  // quadrature bins for the E-step posteriors
    double min_rel_improvement = 1e-5;
    double kappa_low = 1e-3;
    double kappa_high = 1e6;

    void validate() const;
};

struct EmIterate {
    double kappa_z = 0.0;
    double kappa_phi = 0.0;
    double total_log_likelihood = 0.0;
};

using EmTrace = std::vector<EmIterate>;

/// Smoothed state posteriors of one sequence on a quadrature grid, plus the
/// expectations the M-step consumes.
struct SmoothResult {
    int grid_size = 0;
    /// Per-frame posterior p(z_t | X_{1:T}) as grid masses; each sums to 1.
    std::vector<std::vector<double>> posteriors;
    /// Per-transition E[cos(z_{t+1} - z_t)], length T - 1.
    std::vector<double> transition_cos;
    /// E[cos(phi - z_t)] for every DOA measurement, in frame order.
    std::vector<double> observation_cos;
};

/// Forward-backward smoothing on the grid. Empty frames enter with a unit
/// emission. Requires at least two frames.
SmoothResult smooth_posteriors(std::span<const FrameObservation> observations,
                               const KalmanParams& params, int grid_size);

/// Pooled sufficient statistics for the M-step.
struct MStepStats {
    double observation_cos_sum = 0.0;
    long observation_count = 0;
    double transition_cos_sum = 0.0;
    long transition_count = 0;

    void accumulate(const SmoothResult& smoothed);
};

/// Bessel-ratio inversions of the pooled means, clamped to the config's
/// kappa bounds. Throws if either statistic is empty.
KalmanParams m_step(const MStepStats& stats, const EmConfig& config);

struct FitResult {
    KalmanParams params;  // best-likelihood iterate
    EmTrace trace;        // one row per EM iteration performed
};

/// EM over pooled sequences: grid-quadrature E-step, Bessel-ratio M-step,
/// likelihood recomputed with the tracker at every iterate. Stops at
/// max_iters or when the relative likelihood improvement falls below the
/// configured threshold; returns the best-likelihood iterate seen (the
/// approximate E-step gives no monotonicity guarantee).
FitResult fit(std::span<const std::vector<FrameObservation>> sequences,
              const KalmanParams& init, const EmConfig& config);

}  // namespace circletrack
