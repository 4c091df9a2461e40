#include "circletrack/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "circletrack/von_mises.hpp"

namespace circletrack {

void SimConfig::validate() const {
    if (n_speakers < 1) throw std::invalid_argument("sim: n_speakers must be >= 1");
    if (meeting_seconds < 10 * kFrameSeconds) {
        throw std::invalid_argument("sim: meeting_seconds too short");
    }
    if (n_bins < 2) throw std::invalid_argument("sim: n_bins must be >= 2");
    if (embedding_dim < n_speakers) {
        throw std::invalid_argument("sim: embedding_dim must be >= n_speakers");
    }
    if (!(kappa_z_true >= 0.0) || !(kappa_phi_true >= 0.0)) {
        throw std::invalid_argument("sim: concentrations must be >= 0");
    }
    if (moving_fraction < 0.0 || moving_fraction > 1.0) {
        throw std::invalid_argument("sim: moving_fraction must lie in [0, 1]");
    }
    if (segment_length_min_s < 2 * kFrameSeconds) {
        throw std::invalid_argument("sim: segment_length_min_s must be >= 0.8");
    }
    if (segment_length_median_s < segment_length_min_s) {
        throw std::invalid_argument("sim: segment_length_median_s below the minimum length");
    }
    if (overlap_probability < 0.0 || overlap_probability > 1.0) {
        throw std::invalid_argument("sim: overlap_probability must lie in [0, 1]");
    }
    if (observation != "ssl" && observation != "doa") {
        throw std::invalid_argument("sim: observation must be 'ssl' or 'doa'");
    }
    if (move_style != "random_walk" && move_style != "linear_walk") {
        throw std::invalid_argument("sim: move_style must be 'random_walk' or 'linear_walk'");
    }
}

long SimConfig::moving_speaker_count() const {
    return std::lround(moving_fraction * n_speakers);
}

double SimConfig::region_dwell_seconds() const {
    if (min_region_dwell_s > 0.0) return min_region_dwell_s;
    // The hour-scale criterion asks for 30s of dwell per region; scale that
    // fraction down to the synthetic meeting length, floored at 2s.
    return std::max(meeting_seconds * 30.0 / 3600.0, 5 * kFrameSeconds);
}

namespace {

constexpr int kOccupancyBins = 360;
constexpr int kMinArcBins = 30;  // pi/6 radians at 360 bins

int occupancy_bin(Angle a) {
    int bin = static_cast<int>(std::floor((a.radians() + std::numbers::pi) / kTwoPi *
                                          kOccupancyBins));
    return std::clamp(bin, 0, kOccupancyBins - 1);
}

}  // namespace

bool trajectory_moves(const std::vector<Angle>& trajectory, long dwell_frames) {
    if (trajectory.empty() || dwell_frames < 1) return false;
    std::vector<long> occupancy(kOccupancyBins, 0);
    for (Angle a : trajectory) ++occupancy[occupancy_bin(a)];

    // Removing two disjoint pi/6 arcs leaves two regions; the speaker must
    // dwell at least dwell_frames in each. Checking minimum-width arcs is
    // enough: shrinking an arc only grows the regions. Circular range sums
    // come from a doubled prefix array.
    std::vector<long> prefix(2 * kOccupancyBins + 1, 0);
    for (int i = 0; i < 2 * kOccupancyBins; ++i) {
        prefix[i + 1] = prefix[i] + occupancy[i % kOccupancyBins];
    }
    const auto range_dwell = [&](int begin, int length) {
        return prefix[begin + length] - prefix[begin];
    };

    const int free_bins = kOccupancyBins - 2 * kMinArcBins;
    for (int arc1 = 0; arc1 < kOccupancyBins; ++arc1) {
        const int region1_begin = arc1 + kMinArcBins;
        for (int len1 = 1; len1 < free_bins; ++len1) {
            if (range_dwell(region1_begin, len1) < dwell_frames) continue;
            const int region2_begin = region1_begin + len1 + kMinArcBins;
            if (range_dwell(region2_begin, free_bins - len1) >= dwell_frames) return true;
        }
    }
    return false;
}

namespace {

std::vector<Angle> random_walk_trajectory(const SimConfig& config, Rng& rng) {
    const long frames = config.frame_count();
    std::vector<Angle> out;
    out.reserve(frames);
    Angle position(rng.uniform(-std::numbers::pi, std::numbers::pi));
    for (long t = 0; t < frames; ++t) {
        if (t > 0) {
            position = vm_sample(VonMises(position, config.move_step_concentration), rng);
        }
        out.push_back(position);
    }
    return out;
}

// Hold at one position, sweep linearly to another, hold there. Deliberately
// mismatched to the random-walk transition model.
std::vector<Angle> linear_walk_trajectory(const SimConfig& config, Rng& rng) {
    const long frames = config.frame_count();
    const double from = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const double span = (rng.uniform() < 0.5 ? -1.0 : 1.0) *
                        rng.uniform(std::numbers::pi / 2, std::numbers::pi);
    const long hold = std::lround(frames * rng.uniform(0.25, 0.4));
    const long walk = std::max<long>(1, std::lround(frames * rng.uniform(0.1, 0.2)));
    std::vector<Angle> out;
    out.reserve(frames);
    for (long t = 0; t < frames; ++t) {
        double position = from;
        if (t >= hold + walk) {
            position = from + span;
        } else if (t >= hold) {
            position = from + span * static_cast<double>(t - hold) / walk;
        }
        out.push_back(Angle(position));
    }
    return out;
}

}  // namespace

std::vector<Angle> simulate_trajectory(const SimConfig& config, int speaker_index, Rng& rng) {
    const long frames = config.frame_count();
    const bool moving = speaker_index < config.moving_speaker_count();
    if (!moving) {
        return std::vector<Angle>(frames,
                                  Angle(rng.uniform(-std::numbers::pi, std::numbers::pi)));
    }
    const long dwell_frames = seconds_to_frame(config.region_dwell_seconds());
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<Angle> trajectory = (config.move_style == "linear_walk")
                                            ? linear_walk_trajectory(config, rng)
                                            : random_walk_trajectory(config, rng);
        if (trajectory_moves(trajectory, dwell_frames)) return trajectory;
    }
    throw std::runtime_error(
        "simulate_trajectory: could not satisfy the two-region movement criterion in 1000 "
        "attempts; lower move_step_concentration or min_region_dwell_s");
}

SslVector emit_ssl_frame(Angle true_angle, double kappa_phi_true, const BinLayout& layout,
                         double noise_level, Rng& rng) {
    SslVector out;
    out.probs.resize(layout.n_bins);
    double total = 0.0;
    for (int i = 0; i < layout.n_bins; ++i) {
        const double diff = layout.angles[i].radians() - true_angle.radians();
        double value = std::exp(kappa_phi_true * (std::cos(diff) - 1.0));
        if (noise_level > 0.0) value *= std::exp(noise_level * rng.normal());
        out.probs[i] = value;
        total += value;
    }
    for (double& p : out.probs) p /= total;
    return out;
}

std::vector<double> emit_embedding(const std::vector<double>& speaker_centroid,
                                   double noise_scale, Rng& rng) {
    std::vector<double> out(speaker_centroid.size());
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = speaker_centroid[i] + noise_scale * rng.normal();
        norm_sq += out[i] * out[i];
    }
    const double norm = std::sqrt(norm_sq);
    if (!(norm > 0.0)) return speaker_centroid;
    for (double& x : out) x /= norm;
    return out;
}

namespace {

std::vector<std::vector<double>> orthonormal_centroids(int count, int dim, Rng& rng) {
    std::vector<std::vector<double>> centroids;
    centroids.reserve(count);
    while (static_cast<int>(centroids.size()) < count) {
        std::vector<double> v(dim);
        for (double& x : v) x = rng.normal();
        for (const auto& prev : centroids) {
            double dot = 0.0;
            for (int i = 0; i < dim; ++i) dot += v[i] * prev[i];
            for (int i = 0; i < dim; ++i) v[i] -= dot * prev[i];
        }
        double norm_sq = 0.0;
        for (double x : v) norm_sq += x * x;
        if (norm_sq < 1e-12) continue;  // redraw a degenerate direction
        const double norm = std::sqrt(norm_sq);
        for (double& x : v) x /= norm;
        centroids.push_back(std::move(v));
    }
    return centroids;
}

std::string zero_padded(const char* prefix, int value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%s%04d", prefix, value);
    return buffer;
}

}  // namespace

Meeting simulate_meeting(const SimConfig& config) {
    config.validate();
    const long frames = config.frame_count();
    const BinLayout layout(config.n_bins);

    Meeting meeting;
    std::vector<std::vector<Angle>> trajectories;
    trajectories.reserve(config.n_speakers);
    for (int s = 0; s < config.n_speakers; ++s) {
        Rng traj_rng(substream_seed(config.seed, "trajectory", s));
        trajectories.push_back(simulate_trajectory(config, s, traj_rng));

        TruthSpeaker speaker;
        speaker.id = zero_padded("spk", s);
        speaker.moving = s < config.moving_speaker_count();
        speaker.trajectory.reserve(frames);
        for (long t = 0; t < frames; ++t) {
            speaker.trajectory.emplace_back(t, trajectories[s][t].radians());
        }
        meeting.truth.speakers.push_back(std::move(speaker));
    }

    Rng centroid_rng(substream_seed(config.seed, "speaker_centroids"));
    const auto centroids =
        orthonormal_centroids(config.n_speakers, config.embedding_dim, centroid_rng);

    Rng layout_rng(substream_seed(config.seed, "layout"));
    const auto draw_length = [&](double scale) {
        const double length = scale * config.segment_length_median_s *
                              std::exp(config.segment_length_sigma * layout_rng.normal());
        return std::max(length, scale * config.segment_length_min_s);
    };
    const auto pick_speaker = [&](int exclude) {
        if (config.n_speakers == 1) return 0;
        int s;
        do {
            s = static_cast<int>(layout_rng.uniform() * config.n_speakers);
            s = std::min(s, config.n_speakers - 1);
        } while (s == exclude);
        return s;
    };

    int seg_counter = 0;
    const auto emit_segment = [&](int speaker, int channel, double start_s, double end_s) {
        SegmentRecord seg;
        seg.id = zero_padded("seg", seg_counter);
        seg.channel = channel;
        seg.start_s = start_s;
        seg.end_s = end_s;

        Rng emb_rng(substream_seed(config.seed, "embedding", seg_counter));
        seg.embedding = emit_embedding(centroids[speaker], config.embedding_noise, emb_rng);

        Rng obs_rng(substream_seed(config.seed, "observation", seg_counter));
        TruthSegment truth_seg;
        truth_seg.id = seg.id;
        truth_seg.speaker = zero_padded("spk", speaker);
        truth_seg.channel = channel;
        truth_seg.start_s = start_s;
        truth_seg.end_s = end_s;
        for (long t = seg.start_frame(); t < seg.end_frame() && t < frames; ++t) {
            FrameRecord frame;
            frame.t_index = t;
            // The instantaneous estimate scatters around the true position
            // with the observation concentration.
            const Angle center =
                vm_sample(VonMises(trajectories[speaker][t], config.kappa_phi_true), obs_rng);
            if (config.observation == "ssl") {
                frame.ssl =
                    emit_ssl_frame(center, config.kappa_phi_true, layout, config.ssl_noise,
                                   obs_rng)
                        .probs;
            } else {
                frame.doa = center.radians();
            }
            truth_seg.observed_frames.push_back(t);
            seg.frames.push_back(std::move(frame));
        }
        ++seg_counter;
        meeting.segments.push_back(std::move(seg));
        meeting.truth.segments.push_back(std::move(truth_seg));
    };

    double clock_s = 0.0;
    int previous_speaker = -1;
    while (clock_s + config.segment_length_min_s <= config.meeting_seconds) {
        const int speaker = pick_speaker(previous_speaker);
        const double length =
            std::min(draw_length(1.0), config.meeting_seconds - clock_s);
        if (length < config.segment_length_min_s) break;
        emit_segment(speaker, 0, clock_s, clock_s + length);

        if (layout_rng.uniform() < config.overlap_probability &&
            length >= 2.5 * config.segment_length_min_s) {
            const int other = pick_speaker(speaker);
            const double start2 = clock_s + length * layout_rng.uniform(0.2, 0.5);
            const double end2 =
                std::min(clock_s + length, start2 + draw_length(1.0));
            if (end2 - start2 >= config.segment_length_min_s) {
                emit_segment(other, 1, start2, end2);
            }
        }

        previous_speaker = speaker;
        clock_s += length + config.gap_factor * draw_length(1.0);
    }

    if (meeting.segments.empty()) {
        throw std::runtime_error("simulate_meeting: no segments generated; meeting too short");
    }
    return meeting;
}

}  // namespace circletrack
