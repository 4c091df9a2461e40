#include "circletrack/ahc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace circletrack {

void AffinityConfig::validate() const {
    if (!(weight_speaker >= 0.0) || !(weight_location >= 0.0)) {
        throw std::invalid_argument("AffinityConfig: weights must be >= 0");
    }
    if (weight_speaker + weight_location <= 0.0) {
        throw std::invalid_argument("AffinityConfig: weights must not both be zero");
    }
}

namespace {

std::vector<double> unit_normalized(const std::vector<double>& v, const char* what) {
    double norm_sq = 0.0;
    for (double x : v) norm_sq += x * x;
    const double norm = std::sqrt(norm_sq);
    if (!(norm > 0.0)) {
        throw std::invalid_argument(std::string(what) + ": zero embedding");
    }
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / norm;
    return out;
}

void refresh_centroids(Cluster& c, long member_count) {
    std::vector<double> mean(c.embedding_sum.size());
    for (std::size_t i = 0; i < mean.size(); ++i) {
        mean[i] = c.embedding_sum[i] / member_count;
    }
    c.embedding_centroid = unit_normalized(mean, "cluster centroid");

    if (c.ssl_frame_count > 0) {
        std::vector<double> ssl_mean(c.ssl_sum.size());
        for (std::size_t i = 0; i < ssl_mean.size(); ++i) {
            ssl_mean[i] = c.ssl_sum[i] / c.ssl_frame_count;
        }
        const BinLayout layout(static_cast<int>(ssl_mean.size()));
        c.ssl_centroid = validate_ssl(ssl_mean, layout);
    } else {
        c.ssl_centroid.reset();
    }
}

void refresh_log_likelihood(Cluster& c, const KalmanParams& params) {
    c.own_log_likelihood =
        c.stream.empty() ? 0.0 : sparse_log_likelihood(c.stream, params).total_log_likelihood;
}

std::vector<SparseFrame> merge_streams(const std::vector<SparseFrame>& a,
                                       const std::vector<SparseFrame>& b) {
    std::vector<SparseFrame> merged;
    merged.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].t_index < b[j].t_index)) {
            merged.push_back(a[i++]);
        } else if (i == a.size() || b[j].t_index < a[i].t_index) {
            merged.push_back(b[j++]);
        } else {
            // Overlapping frame: both channels' measurements apply at once.
            SparseFrame frame = a[i++];
            const SparseFrame& other = b[j++];
            frame.obs.measurements.insert(frame.obs.measurements.end(),
                                          other.obs.measurements.begin(),
                                          other.obs.measurements.end());
            merged.push_back(std::move(frame));
        }
    }
    return merged;
}

}  // namespace

Cluster make_cluster(const SegmentRecord& segment, const BinLayout* layout,
                     const KalmanParams& params) {
    if (segment.end_frame() <= segment.start_frame()) {
        throw std::invalid_argument("make_cluster: segment " + segment.id + " has empty span");
    }
    Cluster c;
    c.member_ids = {segment.id};
    c.embedding_sum = segment.embedding;
    {
        double norm_sq = 0.0;
        for (double x : segment.embedding) {
            if (!std::isfinite(x)) {
                throw std::invalid_argument("make_cluster: non-finite embedding in " + segment.id);
            }
            norm_sq += x * x;
        }
        if (std::fabs(std::sqrt(norm_sq) - 1.0) > 1e-6) {
            throw std::invalid_argument("make_cluster: embedding of " + segment.id +
                                        " is not unit norm");
        }
    }
    c.start_frame = segment.start_frame();
    c.end_frame = segment.end_frame();

    for (const FrameRecord& frame : segment.frames) {
        if (!frame.observed()) continue;
        SparseFrame sparse{frame.t_index, {}};
        if (!frame.ssl.empty()) {
            if (layout == nullptr || static_cast<int>(frame.ssl.size()) != layout->n_bins) {
                throw std::invalid_argument("make_cluster: SSL frame does not match bin layout");
            }
            const SslVector validated = validate_ssl(frame.ssl, *layout);
            sparse.obs.measurements.push_back(
                Measurement::ssl(ssl_summarize(validated, *layout, params.kappa_phi)));
            if (c.ssl_sum.empty()) c.ssl_sum.assign(layout->n_bins, 0.0);
            for (int i = 0; i < layout->n_bins; ++i) c.ssl_sum[i] += validated.probs[i];
            ++c.ssl_frame_count;
        }
        if (frame.doa.has_value()) {
            // Angle's constructor rejects non-finite values.
            sparse.obs.measurements.push_back(Measurement::doa(Angle(*frame.doa)));
        }
        c.stream.push_back(std::move(sparse));
    }
    std::sort(c.stream.begin(), c.stream.end(),
              [](const SparseFrame& x, const SparseFrame& y) { return x.t_index < y.t_index; });
    c.observed_frame_count = static_cast<long>(c.stream.size());

    refresh_centroids(c, 1);
    refresh_log_likelihood(c, params);
    return c;
}

Cluster merge_clusters(const Cluster& a, const Cluster& b, const KalmanParams& params) {
    Cluster c;
    c.member_ids.reserve(a.member_ids.size() + b.member_ids.size());
    std::merge(a.member_ids.begin(), a.member_ids.end(), b.member_ids.begin(), b.member_ids.end(),
               std::back_inserter(c.member_ids));

    c.embedding_sum = a.embedding_sum;
    for (std::size_t i = 0; i < c.embedding_sum.size(); ++i) {
        c.embedding_sum[i] += b.embedding_sum[i];
    }
    if (!a.ssl_sum.empty() || !b.ssl_sum.empty()) {
        const std::size_t bins = std::max(a.ssl_sum.size(), b.ssl_sum.size());
        c.ssl_sum.assign(bins, 0.0);
        for (std::size_t i = 0; i < a.ssl_sum.size(); ++i) c.ssl_sum[i] += a.ssl_sum[i];
        for (std::size_t i = 0; i < b.ssl_sum.size(); ++i) c.ssl_sum[i] += b.ssl_sum[i];
    }
    c.ssl_frame_count = a.ssl_frame_count + b.ssl_frame_count;
    c.start_frame = std::min(a.start_frame, b.start_frame);
    c.end_frame = std::max(a.end_frame, b.end_frame);
    c.stream = merge_streams(a.stream, b.stream);
    c.observed_frame_count = static_cast<long>(c.stream.size());

    refresh_centroids(c, static_cast<long>(c.member_ids.size()));
    refresh_log_likelihood(c, params);
    return c;
}

double speaker_affinity(const Cluster& a, const Cluster& b) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.embedding_centroid.size(); ++i) {
        dot += a.embedding_centroid[i] * b.embedding_centroid[i];
    }
    return std::clamp(dot, -1.0, 1.0);
}

double kl_affinity(const Cluster& a, const Cluster& b) {
    if (!a.ssl_centroid || !b.ssl_centroid) {
        throw LocationAffinityUnavailable("kl_affinity: cluster has no SSL centroid");
    }
    const std::vector<double>& p = a.ssl_centroid->probs;
    const std::vector<double>& q = b.ssl_centroid->probs;
    double kl_pq = 0.0;
    double kl_qp = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double log_ratio = std::log(p[i] / q[i]);
        kl_pq += p[i] * log_ratio;
        kl_qp -= q[i] * log_ratio;
    }
    return -0.5 * (kl_pq + kl_qp);
}

double track_affinity(const Cluster& a, const Cluster& b, const KalmanParams& params) {
    const long observed = a.observed_frame_count + b.observed_frame_count;
    if (observed == 0) return 0.0;
    const std::vector<SparseFrame> merged = merge_streams(a.stream, b.stream);
    const double merged_ll = sparse_log_likelihood(merged, params).total_log_likelihood;
    return (merged_ll - a.own_log_likelihood - b.own_log_likelihood) / observed;
}

double combined_affinity(const Cluster& a, const Cluster& b, const AffinityConfig& config) {
    double affinity = config.weight_speaker * speaker_affinity(a, b);
    if (config.weight_location != 0.0) {
        switch (config.location_kind) {
            case LocationKind::kNone:
                break;
            case LocationKind::kKl:
                affinity += config.weight_location * kl_affinity(a, b);
                break;
            case LocationKind::kTrack:
                affinity += config.weight_location * track_affinity(a, b, config.params);
                break;
        }
    }
    return affinity;
}

namespace {

const BinLayout* shared_layout(const std::vector<SegmentRecord>& segments,
                               std::optional<BinLayout>& storage) {
    int bins = 0;
    for (const SegmentRecord& seg : segments) {
        for (const FrameRecord& frame : seg.frames) {
            if (frame.ssl.empty()) continue;
            const int n = static_cast<int>(frame.ssl.size());
            if (bins == 0) {
                bins = n;
            } else if (bins != n) {
                throw std::invalid_argument("cluster: inconsistent SSL bin counts");
            }
        }
    }
    if (bins == 0) return nullptr;
    storage.emplace(bins);
    return &*storage;
}

}  // namespace

AhcPath cluster_path(const std::vector<SegmentRecord>& segments, const AffinityConfig& config) {
    config.validate();
    if (segments.empty()) {
        throw std::invalid_argument("cluster_path: no segments");
    }

    std::optional<BinLayout> layout_storage;
    const BinLayout* layout = shared_layout(segments, layout_storage);

    AhcPath path;
    std::vector<Cluster> clusters;
    clusters.reserve(segments.size());
    for (const SegmentRecord& seg : segments) {
        path.segment_ids.push_back(seg.id);
        path.segment_start_frames.push_back(seg.start_frame());
        clusters.push_back(make_cluster(seg, layout, config.params));
    }

    const std::size_t n = clusters.size();
    std::vector<char> active(n, 1);
    std::vector<std::vector<double>> affinity(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            affinity[i][j] = combined_affinity(clusters[i], clusters[j], config);
        }
    }

    int step = 0;
    for (std::size_t remaining = n; remaining > 1; --remaining) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        std::size_t best_j = 0;
        bool found = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                const double value = affinity[i][j];
                bool better = value > best;
                if (!better && value == best && found) {
                    // Ties go to the lexicographically smallest id pair.
                    const auto key = [&](std::size_t a, std::size_t b) {
                        return std::minmax(clusters[a].representative_id(),
                                           clusters[b].representative_id());
                    };
                    better = key(i, j) < key(best_i, best_j);
                }
                if (better) {
                    best = value;
                    best_i = i;
                    best_j = j;
                    found = true;
                }
            }
        }
        if (!found) {
            throw std::runtime_error("cluster_path: no comparable affinity pair (non-finite?)");
        }

        const auto [id_a, id_b] = std::minmax(clusters[best_i].representative_id(),
                                              clusters[best_j].representative_id());
        path.merges.push_back({step++, id_a, id_b, best});

        clusters[best_i] = merge_clusters(clusters[best_i], clusters[best_j], config.params);
        active[best_j] = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == best_i) continue;
            const double value = combined_affinity(clusters[std::min(k, best_i)],
                                                   clusters[std::max(k, best_i)], config);
            affinity[std::min(k, best_i)][std::max(k, best_i)] = value;
        }
    }
    return path;
}

std::map<std::string, int> labels_at_threshold(const AhcPath& path, double threshold) {
    const std::size_t n = path.segment_ids.size();
    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < n; ++i) index_of.emplace(path.segment_ids[i], i);

    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    for (const MergeRecord& merge : path.merges) {
        if (merge.affinity < threshold) break;
        // The recorded ids are member segments, so find() locates the
        // clusters they currently belong to.
        const std::size_t ra = find(index_of.at(merge.id_a));
        const std::size_t rb = find(index_of.at(merge.id_b));
        parent[rb] = ra;
    }

    struct Group {
        long start = 0;
        std::string min_id;
        std::vector<std::size_t> members;
    };
    std::map<std::size_t, Group> groups;
    for (std::size_t i = 0; i < n; ++i) {
        Group& g = groups[find(i)];
        if (g.members.empty()) {
            g.start = path.segment_start_frames[i];
            g.min_id = path.segment_ids[i];
        } else {
            g.start = std::min(g.start, path.segment_start_frames[i]);
            g.min_id = std::min(g.min_id, path.segment_ids[i]);
        }
        g.members.push_back(i);
    }

    std::vector<const Group*> ordered;
    ordered.reserve(groups.size());
    for (const auto& [root, group] : groups) ordered.push_back(&group);
    std::sort(ordered.begin(), ordered.end(), [](const Group* a, const Group* b) {
        return std::tie(a->start, a->min_id) < std::tie(b->start, b->min_id);
    });

    std::map<std::string, int> labels;
    int next_label = 0;
    for (const Group* group : ordered) {
        for (std::size_t member : group->members) {
            labels[path.segment_ids[member]] = next_label;
        }
        ++next_label;
    }
    return labels;
}

ClusterResult cluster(const std::vector<SegmentRecord>& segments, const AffinityConfig& config) {
    const AhcPath path = cluster_path(segments, config);
    ClusterResult result;
    result.labels = labels_at_threshold(path, config.stop_threshold);
    for (const MergeRecord& merge : path.merges) {
        if (merge.affinity < config.stop_threshold) break;
        result.dendrogram.push_back(merge);
    }
    return result;
}

}  // namespace circletrack
