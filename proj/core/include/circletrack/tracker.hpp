#pragma once

#include <span>
#include <vector>

#include "circletrack/ssl.hpp"
#include "circletrack/von_mises.hpp"

namespace circletrack {

/// The two filter parameters: kappa_z bounds how fast a speaker can move
/// between frames, kappa_phi how noisy a single observation is.
struct KalmanParams {
    double kappa_z = 1.0;
    double kappa_phi = 1.0;

    KalmanParams() = default;
    KalmanParams(double kz, double kphi);
};

/// One location measurement: either a scalar DOA (scored with the global
/// observation concentration) or an SSL frame summarized as (rho, mu), which
/// carries its own per-frame concentration.
struct Measurement {
    enum class Kind { kDoa, kSsl };

    Kind kind = Kind::kDoa;
    Angle angle;       // phi for DOA, mu for SSL
    double rho = 0.0;  // SSL equivalent concentration; ignored for DOA

    static Measurement doa(Angle phi) { return {Kind::kDoa, phi, 0.0}; }
    static Measurement ssl(const SslSummary& s) { return {Kind::kSsl, s.mu, s.rho}; }

    double concentration(const KalmanParams& params) const {
        return kind == Kind::kDoa ? params.kappa_phi : rho;
    }
};

/// Per-frame observation: zero measurements encodes a frame where the
/// speaker is not observed; several encode simultaneous separated channels.
struct FrameObservation {
    std::vector<Measurement> measurements;

    bool empty() const { return measurements.empty(); }
};

/// Filtering belief p(z_t | X_{1:t}) plus the frame counter.
struct FilterState {
    VonMises belief;  // uniform (concentration 0) at initialization
    long frame_index = 0;
};

struct TrackResult {
    double total_log_likelihood = 0.0;
    std::vector<double> per_frame_log_likelihood;
    long observed_frame_count = 0;
    FilterState final_state;
};

/// Uniform initial belief: complete uncertainty before any observation.
FilterState init_state();

/// Prediction step: the belief diffuses through the transition kernel (von
/// Mises convolution approximation); mean unchanged, concentration shrinks.
FilterState predict(const FilterState& state, const KalmanParams& params);

/// Prediction across n consecutive frames collapsed into one inversion.
FilterState predict_n(const FilterState& state, const KalmanParams& params, long n);

/// Update step: multiplies the belief by one von Mises factor per
/// measurement; an empty observation leaves the belief unchanged.
FilterState update(const FilterState& state, const FrameObservation& obs,
                   const KalmanParams& params);

/// Log-density of the frame's measurements under the post-predict state.
/// Multiple measurements share z_t and are scored by the chain rule with no
/// transition in between; an empty frame contributes exactly 0.
double frame_log_likelihood(const FilterState& state, const FrameObservation& obs,
                            const KalmanParams& params);

/// Full forward pass over a dense frame sequence: score then update each
/// frame, with a prediction before every frame except the first.
TrackResult sequence_log_likelihood(std::span<const FrameObservation> observations,
                                    const KalmanParams& params);

/// A frame observation pinned to a global frame index, for streams that
/// materialize only observed frames.
struct SparseFrame {
    long t_index = 0;
    FrameObservation obs;
};

/// Same forward pass over a sparse stream (sorted by t_index, duplicates
/// merged by the caller); gaps are collapsed into multi-step predictions, so
/// cost scales with observed frames rather than span. Equals the dense pass
/// over the padded sequence, since empty frames score 0 and leading empties
/// keep the prior uniform.
TrackResult sparse_log_likelihood(std::span<const SparseFrame> frames,
                                  const KalmanParams& params);

}  // namespace circletrack
