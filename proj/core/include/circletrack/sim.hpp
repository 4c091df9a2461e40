#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "circletrack/rng.hpp"
#include "circletrack/segment.hpp"
#include "circletrack/ssl.hpp"

namespace circletrack {

struct SimConfig {
    int n_speakers = 4;
    double meeting_seconds = 300.0;
    int n_bins = 360;
    int embedding_dim = 128;
    double kappa_z_true = 50.0;
    double kappa_phi_true = 20.0;
    double moving_fraction = 0.0;
    double move_step_concentration = 400.0;
    /// Turn lengths are lognormal with this median and log-sigma, floored.
    double segment_length_median_s = 2.5;
    double segment_length_sigma = 0.6;
    double segment_length_min_s = 0.8;
    /// Silence gaps between turns come from the same length distribution,
    /// scaled by this factor.
    double gap_factor = 0.5;
    double overlap_probability = 0.1;
    double embedding_noise = 0.3;
    double ssl_noise = 0.0;             // multiplicative bin noise, 0 = exact
    std::string observation = "ssl";    // "ssl" | "doa"
    std::string move_style = "random_walk";  // | "linear_walk"
    /// Minimum dwell per angular region for a trajectory to count as moving;
    /// 0 selects the meeting-length scaled default.
    double min_region_dwell_s = 0.0;
    std::uint64_t seed = 1;

    void validate() const;
    long frame_count() const { return seconds_to_frame(meeting_seconds); }
    long moving_speaker_count() const;
    double region_dwell_seconds() const;
};

/// True when two disjoint arcs of at least pi/6 radians each can be removed
/// from the circle such that the trajectory dwells at least dwell_frames in
/// both of the two remaining angular regions, i.e. the speaker occupies two
/// well-separated regions for sustained stretches.
bool trajectory_moves(const std::vector<Angle>& trajectory, long dwell_frames);

/// Per-frame trajectory over the whole meeting. Stationary speakers hold a
/// fixed uniform-random angle; moving speakers follow either a von Mises
/// random walk or a hold-walk-hold sweep, rejection-sampled until the
/// two-region movement criterion holds. Throws after 1000 rejected draws.
std::vector<Angle> simulate_trajectory(const SimConfig& config, int speaker_index, Rng& rng);

/// Discretized von Mises SSL frame about true_angle, optionally perturbed by
/// multiplicative log-normal bin noise and renormalized. With zero noise the
/// output is exactly the discretized von Mises.
SslVector emit_ssl_frame(Angle true_angle, double kappa_phi_true, const BinLayout& layout,
                         double noise_level, Rng& rng);

/// Unit embedding: centroid plus isotropic noise, renormalized.
std::vector<double> emit_embedding(const std::vector<double>& speaker_centroid,
                                   double noise_scale, Rng& rng);

struct Meeting {
    std::vector<SegmentRecord> segments;
    GroundTruth truth;
};

/// Full synthetic meeting: trajectories, turn-taking with gaps and optional
/// cross-channel overlap, per-frame SSL or DOA observations along the true
/// trajectory, and noisy embeddings around orthonormal speaker centroids.
/// Deterministic given the config (all randomness flows from config.seed
/// through named substreams).
Meeting simulate_meeting(const SimConfig& config);

}  // namespace circletrack
