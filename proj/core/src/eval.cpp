#include "circletrack/eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace circletrack {

EvalReport score(const GroundTruth& truth, const std::map<std::string, int>& labels) {
    std::map<std::string, int> speaker_index;
    std::vector<char> speaker_moving;
    for (const TruthSpeaker& spk : truth.speakers) {
        speaker_index.emplace(spk.id, static_cast<int>(speaker_index.size()));
        speaker_moving.push_back(spk.moving ? 1 : 0);
    }

    // Remap cluster labels to contiguous rows in sorted label order.
    std::map<int, int> cluster_row;
    for (const TruthSegment& seg : truth.segments) {
        const auto it = labels.find(seg.id);
        if (it == labels.end()) {
            throw std::invalid_argument("score: segment " + seg.id + " missing from clustering");
        }
        cluster_row.emplace(it->second, 0);
    }
    {
        int next = 0;
        for (auto& [label, row] : cluster_row) row = next++;
    }

    const int n_clusters = static_cast<int>(cluster_row.size());
    const int n_speakers = static_cast<int>(speaker_index.size());
    std::vector<std::vector<long>> overlap(n_clusters, std::vector<long>(n_speakers, 0));
    long total_units = 0;
    for (const TruthSegment& seg : truth.segments) {
        const auto spk = speaker_index.find(seg.speaker);
        if (spk == speaker_index.end()) {
            throw std::invalid_argument("score: unknown speaker " + seg.speaker);
        }
        const int row = cluster_row.at(labels.at(seg.id));
        const long units = static_cast<long>(seg.observed_frames.size());
        overlap[row][spk->second] += units;
        total_units += units;
    }
    if (total_units == 0) {
        throw std::invalid_argument("score: no observed frames in ground truth");
    }

    std::vector<std::vector<double>> cost(n_clusters, std::vector<double>(n_speakers));
    for (int r = 0; r < n_clusters; ++r) {
        for (int c = 0; c < n_speakers; ++c) {
            cost[r][c] = -static_cast<double>(overlap[r][c]);
        }
    }
    const Assignment assignment = hungarian_assign(cost);

    std::vector<int> row_speaker(n_clusters, -1);
    EvalReport report;
    for (const auto& [label, row] : cluster_row) {
        const int col = assignment.row_to_col[row];
        row_speaker[row] = col;
        if (col >= 0) report.assignment[label] = truth.speakers[col].id;
    }

    long mis_total = 0;
    long stationary_total = 0;
    long stationary_mis = 0;
    long moving_total = 0;
    long moving_mis = 0;
    for (const TruthSegment& seg : truth.segments) {
        const int row = cluster_row.at(labels.at(seg.id));
        const int true_speaker = speaker_index.at(seg.speaker);
        const long units = static_cast<long>(seg.observed_frames.size());
        const bool wrong = row_speaker[row] != true_speaker;
        if (wrong) mis_total += units;
        if (speaker_moving[true_speaker]) {
            moving_total += units;
            if (wrong) moving_mis += units;
        } else {
            stationary_total += units;
            if (wrong) stationary_mis += units;
        }
    }

    report.total_units = total_units;
    report.misassigned_units = mis_total;
    report.frame_error_rate = static_cast<double>(mis_total) / total_units;
    report.cluster_count_delta = n_clusters - n_speakers;
    if (stationary_total > 0) {
        report.stationary_error_rate = static_cast<double>(stationary_mis) / stationary_total;
    }
    if (moving_total > 0) {
        report.moving_error_rate = static_cast<double>(moving_mis) / moving_total;
    }
    return report;
}

}  // namespace circletrack
