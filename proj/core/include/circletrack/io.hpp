#pragma once

#include <string>
#include <vector>

#include "circletrack/ahc.hpp"
#include "circletrack/segment.hpp"

namespace circletrack::io {

/// Segments travel as JSON lines, one object per segment:
///   {"id": ..., "channel": ..., "start_s": ..., "end_s": ...,
///    "embedding": [...], "frames": [{"t_index": ..., "ssl": [...]} |
///                                   {"t_index": ..., "doa": ...} |
///                                   {"t_index": ...}]}
/// Unknown keys are rejected.
void write_segments(const std::string& path, const std::vector<SegmentRecord>& segments);
std::vector<SegmentRecord> read_segments(const std::string& path);

void write_truth(const std::string& path, const GroundTruth& truth);
GroundTruth read_truth(const std::string& path);

/// One diarization span: `SPEAKER <meeting> <channel> <start_s> <dur_s> <label>`.
struct RttmLine {
    std::string meeting;
    int channel = 0;
    double start_s = 0.0;
    double dur_s = 0.0;
    std::string label;
};

void write_rttm(const std::string& path, const std::vector<RttmLine>& lines);
std::vector<RttmLine> read_rttm(const std::string& path);

/// Merge list as JSON: [[step, id_a, id_b, affinity], ...].
void write_dendrogram(const std::string& path, const std::vector<MergeRecord>& merges);

}  // namespace circletrack::io
