#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "circletrack/hungarian.hpp"
#include "circletrack/segment.hpp"

namespace circletrack {

/// Frame-level clustering error under the optimal cluster-to-speaker
/// mapping. The scoring unit is one observed (frame, channel) pair; error
/// rates split by whether the unit's true speaker moves.
struct EvalReport {
    double frame_error_rate = 0.0;
    long cluster_count_delta = 0;  // clusters - true speakers
    std::optional<double> stationary_error_rate;
    std::optional<double> moving_error_rate;
    long total_units = 0;
    long misassigned_units = 0;
    /// cluster label -> speaker id; clusters without a speaker are omitted.
    std::map<int, std::string> assignment;
};

/// Scores a clustering (segment id -> cluster label) against ground truth.
/// Builds the cluster-vs-speaker overlap matrix in observed units, assigns
/// clusters to speakers by hungarian_assign on the negated overlap, and
/// counts every unit outside its cluster's assigned speaker as an error.
/// Throws when a truth segment is missing from the labeling.
EvalReport score(const GroundTruth& truth, const std::map<std::string, int>& labels);

}  // namespace circletrack
