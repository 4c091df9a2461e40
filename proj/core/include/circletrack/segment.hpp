#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace circletrack {

/// Global frame grid resolution: track windows have a duration and shift of
/// 0.4 seconds, and every t_index below refers to this grid.
inline constexpr double kFrameSeconds = 0.4;

inline long seconds_to_frame(double seconds) {
    return std::lround(seconds / kFrameSeconds);
}

/// One frame of a segment as stored on disk: an SSL bin vector, a scalar
/// DOA in radians, or nothing.
struct FrameRecord {
    long t_index = 0;
    std::vector<double> ssl;      // empty when absent
    std::optional<double> doa;

    bool observed() const { return !ssl.empty() || doa.has_value(); }
};

/// A speaker-pure span on one separated channel, with its unit-norm
/// embedding and per-frame observations.
struct SegmentRecord {
    std::string id;
    int channel = 0;
    double start_s = 0.0;
    double end_s = 0.0;
    std::vector<double> embedding;
    std::vector<FrameRecord> frames;

    long start_frame() const { return seconds_to_frame(start_s); }
    long end_frame() const { return seconds_to_frame(end_s); }
};

struct TruthSpeaker {
    std::string id;
    bool moving = false;
    /// frame index -> angle in radians, covering every frame the speaker is
    /// observable on.
    std::vector<std::pair<long, double>> trajectory;
};

struct TruthSegment {
    std::string id;
    std::string speaker;
    int channel = 0;
    double start_s = 0.0;
    double end_s = 0.0;
    std::vector<long> observed_frames;
};

struct GroundTruth {
    std::vector<TruthSpeaker> speakers;
    std::vector<TruthSegment> segments;
};

}  // namespace circletrack
