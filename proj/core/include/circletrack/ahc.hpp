#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "circletrack/segment.hpp"
#include "circletrack/ssl.hpp"
#include "circletrack/tracker.hpp"

namespace circletrack {

/// Raised when a location affinity is requested but the clusters carry no
/// raw SSL frames to build centroids from.
struct LocationAffinityUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LocationKind { kNone, kKl, kTrack };

struct AffinityConfig {
    double weight_speaker = 1.0;
    double weight_location = 0.0;
    LocationKind location_kind = LocationKind::kNone;
    double stop_threshold = 0.0;
    KalmanParams params;  // tracker parameters for the track affinity

    void validate() const;
};

/// A cluster of segments plus everything affinity evaluation needs: the
/// embedding centroid, the SSL centroid (when raw SSL frames exist), the
/// frame extents, and the merged observation stream with its memoized
/// tracking log-likelihood.
struct Cluster {
    std::vector<std::string> member_ids;  // sorted
    std::vector<double> embedding_sum;
    std::vector<double> embedding_centroid;  // unit norm
    std::vector<double> ssl_sum;             // frame-weighted bin mass; empty if none
    long ssl_frame_count = 0;
    std::optional<SslVector> ssl_centroid;  // floored and renormalized mean
    long start_frame = 0;
    long end_frame = 0;
    long observed_frame_count = 0;  // frames bearing at least one measurement
    std::vector<SparseFrame> stream;
    double own_log_likelihood = 0.0;  // tracking LL of the stream; 0 if empty

    const std::string& representative_id() const { return member_ids.front(); }
};

/// Singleton cluster from one segment. The layout (shared across the
/// meeting) is required whenever the segment carries raw SSL frames.
Cluster make_cluster(const SegmentRecord& segment, const BinLayout* layout,
                     const KalmanParams& params);

Cluster merge_clusters(const Cluster& a, const Cluster& b, const KalmanParams& params);

/// Cosine similarity of the unit embedding centroids, in [-1, 1].
double speaker_affinity(const Cluster& a, const Cluster& b);

/// Negative symmetric KL divergence of the SSL centroids: 0 for identical
/// centroids, increasingly negative as they separate. Throws
/// LocationAffinityUnavailable when either centroid is missing.
double kl_affinity(const Cluster& a, const Cluster& b);

/// Tracking log-likelihood ratio between explaining both streams with one
/// shared track and explaining them separately, normalized by the number of
/// observed frames. Defined as 0 when neither cluster has observations.
double track_affinity(const Cluster& a, const Cluster& b, const KalmanParams& params);

/// weight_speaker * speaker + weight_location * location. The location term
/// is not evaluated at all when its weight is zero, so the output is
/// bit-identical across location kinds in that case.
double combined_affinity(const Cluster& a, const Cluster& b, const AffinityConfig& config);

struct MergeRecord {
    int step = 0;
    std::string id_a;  // representative ids, id_a < id_b
    std::string id_b;
    double affinity = 0.0;
};

/// Full greedy merge path down to a single cluster, ignoring the stopping
/// threshold. Greedy order does not depend on the threshold, so any stopping
/// point can be read off the path afterwards.
struct AhcPath {
    std::vector<std::string> segment_ids;
    std::vector<long> segment_start_frames;
    std::vector<MergeRecord> merges;
};

AhcPath cluster_path(const std::vector<SegmentRecord>& segments, const AffinityConfig& config);

/// Replays the path until the first merge whose affinity falls below the
/// threshold. Labels are contiguous integers ordered by earliest start
/// frame (segment id breaking ties).
std::map<std::string, int> labels_at_threshold(const AhcPath& path, double threshold);

struct ClusterResult {
    std::map<std::string, int> labels;
    std::vector<MergeRecord> dendrogram;  // merges actually applied
};

/// Greedy agglomerative clustering: repeatedly merge the highest-affinity
/// pair (ties to the lexicographically smallest id pair) until the maximum
/// affinity falls below config.stop_threshold or one cluster remains.
ClusterResult cluster(const std::vector<SegmentRecord>& segments, const AffinityConfig& config);

}  // namespace circletrack
