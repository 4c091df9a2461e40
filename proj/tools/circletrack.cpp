// circletrack: synthetic-meeting diarization pipeline around a von Mises
// Kalman filter. Subcommands: simulate, fit, diarize, eval, sweep,
// denominator-plot.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "circletrack/ahc.hpp"
#include "circletrack/em.hpp"
#include "circletrack/eval.hpp"
#include "circletrack/io.hpp"
#include "circletrack/sim.hpp"
#include "circletrack/ssl.hpp"

namespace ct = circletrack;
using nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Logging, controlled by CIRCLETRACK_LOG (quiet by default; "info" or
// "debug").

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("CIRCLETRACK_LOG");
        if (env == nullptr) return 0;
        const std::string value(env);
        if (value == "debug") return 2;
        if (value == "info") return 1;
        return 0;
    }();
    return level;
}

template <typename... Args>
void log_info(const char* fmt, Args... args) {
    if (log_level() >= 1) {
        std::fprintf(stderr, "[circletrack] ");
        std::fprintf(stderr, fmt, args...);
        std::fprintf(stderr, "\n");
    }
}

// ---------------------------------------------------------------------------
// Configuration file: one JSON object with optional sections. Unknown keys
// are rejected everywhere.

struct RunConfig {
    std::uint64_t seed = 1;
    std::optional<ct::SimConfig> sim;
    std::optional<ct::KalmanParams> kalman;
    std::optional<ct::AffinityConfig> affinity;
    ct::EmConfig em;
    ordered_json sweep;  // parsed on demand by cmd_sweep
};

void check_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    if (!obj.is_object()) throw std::runtime_error(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* name : allowed) {
            if (key == name) {
                known = true;
                break;
            }
        }
        if (!known) throw std::runtime_error("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void read_into(const ordered_json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

ct::LocationKind parse_location_kind(const std::string& name) {
    if (name == "none") return ct::LocationKind::kNone;
    if (name == "kl") return ct::LocationKind::kKl;
    if (name == "track") return ct::LocationKind::kTrack;
    throw std::runtime_error("location_kind must be one of none|kl|track, got '" + name + "'");
}

ct::LocationKind parse_affinity_flag(const std::string& name) {
    if (name == "speaker") return ct::LocationKind::kNone;
    if (name == "speaker+kl") return ct::LocationKind::kKl;
    if (name == "speaker+track") return ct::LocationKind::kTrack;
    throw std::runtime_error("affinity must be speaker|speaker+kl|speaker+track, got '" + name +
                             "'");
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    ordered_json j;
    try {
        j = ordered_json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("invalid JSON in " + path + ": " + e.what());
    }

    check_keys(j, {"seed", "sim", "kalman", "affinity", "em", "sweep"}, path);
    RunConfig config;
    read_into(j, "seed", config.seed);

    if (j.contains("sim")) {
        const ordered_json& s = j.at("sim");
        check_keys(s,
                   {"n_speakers", "meeting_seconds", "n_bins", "embedding_dim", "kappa_z_true",
                    "kappa_phi_true", "moving_fraction", "move_step_concentration",
                    "segment_length_median_s", "segment_length_sigma", "segment_length_min_s",
                    "gap_factor", "overlap_probability", "embedding_noise", "ssl_noise",
                    "observation", "move_style", "min_region_dwell_s"},
                   path + ":sim");
        ct::SimConfig sim;
        read_into(s, "n_speakers", sim.n_speakers);
        read_into(s, "meeting_seconds", sim.meeting_seconds);
        read_into(s, "n_bins", sim.n_bins);
        read_into(s, "embedding_dim", sim.embedding_dim);
        read_into(s, "kappa_z_true", sim.kappa_z_true);
        read_into(s, "kappa_phi_true", sim.kappa_phi_true);
        read_into(s, "moving_fraction", sim.moving_fraction);
        read_into(s, "move_step_concentration", sim.move_step_concentration);
        read_into(s, "segment_length_median_s", sim.segment_length_median_s);
        read_into(s, "segment_length_sigma", sim.segment_length_sigma);
        read_into(s, "segment_length_min_s", sim.segment_length_min_s);
        read_into(s, "gap_factor", sim.gap_factor);
        read_into(s, "overlap_probability", sim.overlap_probability);
        read_into(s, "embedding_noise", sim.embedding_noise);
        read_into(s, "ssl_noise", sim.ssl_noise);
        read_into(s, "observation", sim.observation);
        read_into(s, "move_style", sim.move_style);
        read_into(s, "min_region_dwell_s", sim.min_region_dwell_s);
        sim.seed = config.seed;
        config.sim = sim;
    }

    if (j.contains("kalman")) {
        const ordered_json& k = j.at("kalman");
        check_keys(k, {"kappa_z", "kappa_phi"}, path + ":kalman");
        double kz = 1.0;
        double kphi = 1.0;
        read_into(k, "kappa_z", kz);
        read_into(k, "kappa_phi", kphi);
        config.kalman = ct::KalmanParams(kz, kphi);
    }

    if (j.contains("affinity")) {
        const ordered_json& a = j.at("affinity");
        check_keys(a, {"weight_speaker", "weight_location", "location_kind", "stop_threshold"},
                   path + ":affinity");
        ct::AffinityConfig affinity;
        read_into(a, "weight_speaker", affinity.weight_speaker);
        read_into(a, "weight_location", affinity.weight_location);
        std::string kind = "none";
        read_into(a, "location_kind", kind);
        affinity.location_kind = parse_location_kind(kind);
        read_into(a, "stop_threshold", affinity.stop_threshold);
        config.affinity = affinity;
    }

    if (j.contains("em")) {
        const ordered_json& e = j.at("em");
        check_keys(e, {"max_iters", "grid_size", "min_rel_improvement", "kappa_low", "kappa_high"},
                   path + ":em");
        read_into(e, "max_iters", config.em.max_iters);
        read_into(e, "grid_size", config.em.grid_size);
        read_into(e, "min_rel_improvement", config.em.min_rel_improvement);
        read_into(e, "kappa_low", config.em.kappa_low);
        read_into(e, "kappa_high", config.em.kappa_high);
    }

    if (j.contains("sweep")) config.sweep = j.at("sweep");
    return config;
}

// ---------------------------------------------------------------------------
// Shared helpers.

std::string format_rate(std::optional<double> rate) {
    if (!rate) return "n/a";
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6f", *rate);
    return buffer;
}

// Per-segment dense DOA sequences for EM fitting: SSL frames contribute
// their mode, DOA frames their value.
std::vector<std::vector<ct::FrameObservation>> fit_sequences(
    const std::vector<ct::SegmentRecord>& segments) {
    std::vector<std::vector<ct::FrameObservation>> sequences;
    std::optional<ct::BinLayout> layout;
    for (const ct::SegmentRecord& seg : segments) {
        const long start = seg.start_frame();
        const long end = seg.end_frame();
        if (end - start < 2) continue;
        std::vector<ct::FrameObservation> sequence(end - start);
        for (const ct::FrameRecord& frame : seg.frames) {
            if (frame.t_index < start || frame.t_index >= end) continue;
            ct::FrameObservation& obs = sequence[frame.t_index - start];
            if (!frame.ssl.empty()) {
                if (!layout || layout->n_bins != static_cast<int>(frame.ssl.size())) {
                    layout.emplace(static_cast<int>(frame.ssl.size()));
                }
                const ct::SslVector validated = ct::validate_ssl(frame.ssl, *layout);
                obs.measurements.push_back(
                    ct::Measurement::doa(ct::ssl_to_doa(validated, *layout)));
            } else if (frame.doa.has_value()) {
                obs.measurements.push_back(ct::Measurement::doa(ct::Angle(*frame.doa)));
            }
        }
        sequences.push_back(std::move(sequence));
    }
    return sequences;
}

ct::AffinityConfig resolve_affinity(const RunConfig& config,
                                    const std::optional<std::string>& affinity_flag,
                                    const std::optional<std::string>& weights_flag,
                                    const std::optional<double>& threshold_flag) {
    ct::AffinityConfig affinity = config.affinity.value_or(ct::AffinityConfig{});
    if (config.kalman) affinity.params = *config.kalman;
    if (affinity_flag) affinity.location_kind = parse_affinity_flag(*affinity_flag);
    if (weights_flag) {
        const auto comma = weights_flag->find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("--weights expects w_speaker,w_location");
        }
        affinity.weight_speaker = std::stod(weights_flag->substr(0, comma));
        affinity.weight_location = std::stod(weights_flag->substr(comma + 1));
    }
    if (threshold_flag) affinity.stop_threshold = *threshold_flag;
    affinity.validate();
    return affinity;
}

std::vector<ct::io::RttmLine> labels_to_rttm(const std::vector<ct::SegmentRecord>& segments,
                                             const std::map<std::string, int>& labels,
                                             const std::string& meeting) {
    std::vector<ct::io::RttmLine> lines;
    lines.reserve(segments.size());
    for (const ct::SegmentRecord& seg : segments) {
        ct::io::RttmLine line;
        line.meeting = meeting;
        line.channel = seg.channel;
        line.start_s = seg.start_s;
        line.dur_s = seg.end_s - seg.start_s;
        line.label = std::to_string(labels.at(seg.id));
        lines.push_back(std::move(line));
    }
    return lines;
}

// Matches RTTM spans back to truth segments through the shared frame grid.
std::map<std::string, int> rttm_to_labels(const std::vector<ct::io::RttmLine>& lines,
                                          const ct::GroundTruth& truth) {
    std::map<std::tuple<int, long, long>, std::string> by_span;
    for (const ct::TruthSegment& seg : truth.segments) {
        by_span[{seg.channel, ct::seconds_to_frame(seg.start_s),
                 ct::seconds_to_frame(seg.end_s)}] = seg.id;
    }
    std::map<std::string, int> label_index;
    for (const ct::io::RttmLine& line : lines) {
        label_index.emplace(line.label, 0);
    }
    {
        int next = 0;
        for (auto& [label, index] : label_index) index = next++;
    }
    std::map<std::string, int> labels;
    for (const ct::io::RttmLine& line : lines) {
        const std::tuple<int, long, long> key{line.channel, ct::seconds_to_frame(line.start_s),
                                              ct::seconds_to_frame(line.start_s + line.dur_s)};
        const auto found = by_span.find(key);
        if (found == by_span.end()) {
            throw std::runtime_error("RTTM span does not match any truth segment (channel " +
                                     std::to_string(line.channel) + ", start " +
                                     std::to_string(line.start_s) + ")");
        }
        labels[found->second] = label_index.at(line.label);
    }
    return labels;
}

void write_report(std::ostream& out, const ct::EvalReport& report) {
    out << "category\terror_rate\n";
    out << "stationary\t" << format_rate(report.stationary_error_rate) << '\n';
    out << "moving\t" << format_rate(report.moving_error_rate) << '\n';
    out << "average\t" << format_rate(report.frame_error_rate) << '\n';
    out << "cluster_count_delta\t" << report.cluster_count_delta << '\n';
    out << "total_units\t" << report.total_units << '\n';
    out << "misassigned_units\t" << report.misassigned_units << '\n';
    out << "assignment\t";
    bool first = true;
    for (const auto& [label, speaker] : report.assignment) {
        if (!first) out << ',';
        out << label << '=' << speaker;
        first = false;
    }
    out << '\n';
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed) {
    RunConfig config = load_config(config_path);
    if (!config.sim) throw std::runtime_error("config has no 'sim' section");
    if (seed) config.sim->seed = *seed;
    config.sim->validate();

    const ct::Meeting meeting = ct::simulate_meeting(*config.sim);
    std::filesystem::create_directories(out_dir);
    ct::io::write_segments(out_dir + "/segments.jsonl", meeting.segments);
    ct::io::write_truth(out_dir + "/truth.json", meeting.truth);
    log_info("simulate: wrote %zu segments for %zu speakers to %s", meeting.segments.size(),
             meeting.truth.speakers.size(), out_dir.c_str());
    std::printf("segments\t%zu\nspeakers\t%zu\n", meeting.segments.size(),
                meeting.truth.speakers.size());
    return 0;
}

int cmd_fit(const std::vector<std::string>& segment_paths, const std::string& config_path,
            const std::string& out_path) {
    const RunConfig config = load_config(config_path);
    const ct::KalmanParams init = config.kalman.value_or(ct::KalmanParams(1.0, 1.0));

    std::vector<std::vector<ct::FrameObservation>> sequences;
    for (const std::string& path : segment_paths) {
        auto part = fit_sequences(ct::io::read_segments(path));
        for (auto& seq : part) sequences.push_back(std::move(seq));
    }
    log_info("fit: %zu sequences", sequences.size());

    const ct::FitResult result = ct::fit(sequences, init, config.em);

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
    out << "iteration\tkappa_z\tkappa_phi\tlog_likelihood\n";
    char buffer[128];
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        std::snprintf(buffer, sizeof(buffer), "%zu\t%.10g\t%.10g\t%.10g\n", i + 1,
                      result.trace[i].kappa_z, result.trace[i].kappa_phi,
                      result.trace[i].total_log_likelihood);
        out << buffer;
    }
    std::printf("kappa_z\t%.10g\nkappa_phi\t%.10g\n", result.params.kappa_z,
                result.params.kappa_phi);
    return 0;
}

int cmd_diarize(const std::string& segments_path, const std::string& config_path,
                const std::string& out_path, const std::optional<std::string>& dendrogram_path,
                const std::optional<std::string>& affinity_flag,
                const std::optional<std::string>& weights_flag,
                const std::optional<double>& threshold_flag, std::string meeting_name) {
    const RunConfig config = load_config(config_path);
    const ct::AffinityConfig affinity =
        resolve_affinity(config, affinity_flag, weights_flag, threshold_flag);

    const std::vector<ct::SegmentRecord> segments = ct::io::read_segments(segments_path);
    if (meeting_name.empty()) {
        meeting_name = std::filesystem::path(segments_path).stem().string();
        if (meeting_name.empty()) meeting_name = "meeting";
    }

    const ct::ClusterResult result = ct::cluster(segments, affinity);
    ct::io::write_rttm(out_path, labels_to_rttm(segments, result.labels, meeting_name));
    if (dendrogram_path) ct::io::write_dendrogram(*dendrogram_path, result.dendrogram);

    int n_clusters = 0;
    for (const auto& [id, label] : result.labels) n_clusters = std::max(n_clusters, label + 1);
    log_info("diarize: %zu segments -> %d clusters", segments.size(), n_clusters);
    std::printf("segments\t%zu\nclusters\t%d\n", segments.size(), n_clusters);
    return 0;
}

int cmd_eval(const std::string& rttm_path, const std::string& truth_path,
             const std::optional<std::string>& out_path) {
    const ct::GroundTruth truth = ct::io::read_truth(truth_path);
    const std::map<std::string, int> labels =
        rttm_to_labels(ct::io::read_rttm(rttm_path), truth);
    const ct::EvalReport report = ct::score(truth, labels);

    std::ostringstream text;
    write_report(text, report);
    std::fputs(text.str().c_str(), stdout);
    if (out_path) {
        std::ofstream out(*out_path);
        if (!out) throw std::runtime_error("cannot open for writing: " + *out_path);
        out << text.str();
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path) {
    const RunConfig config = load_config(config_path);
    if (config.sweep.is_null()) throw std::runtime_error("config has no 'sweep' section");
    check_keys(config.sweep, {"meetings", "affinities", "weights", "thresholds"},
               config_path + ":sweep");

    struct MeetingData {
        std::vector<ct::SegmentRecord> segments;
        ct::GroundTruth truth;
    };
    std::vector<MeetingData> meetings;
    for (const ordered_json& m : config.sweep.at("meetings")) {
        check_keys(m, {"segments", "truth"}, config_path + ":sweep.meetings");
        meetings.push_back({ct::io::read_segments(m.at("segments").get<std::string>()),
                            ct::io::read_truth(m.at("truth").get<std::string>())});
    }
    if (meetings.empty()) throw std::runtime_error("sweep: no meetings listed");

    std::vector<std::string> affinities = {"speaker"};
    if (config.sweep.contains("affinities")) {
        affinities = config.sweep.at("affinities").get<std::vector<std::string>>();
    }
    std::vector<std::pair<double, double>> weight_pairs = {{1.0, 0.0}};
    if (config.sweep.contains("weights")) {
        weight_pairs.clear();
        for (const ordered_json& w : config.sweep.at("weights")) {
            weight_pairs.emplace_back(w.at(0).get<double>(), w.at(1).get<double>());
        }
    }
    std::vector<double> thresholds = {0.0};
    if (config.sweep.contains("thresholds")) {
        thresholds = config.sweep.at("thresholds").get<std::vector<double>>();
    }

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
    out << "affinity\tweight_speaker\tweight_location\tthreshold\tmean_error\tmean_stationary\t"
           "mean_moving\n";

    char buffer[256];
    for (const std::string& name : affinities) {
        for (const auto& [w_speaker, w_location] : weight_pairs) {
            ct::AffinityConfig affinity = config.affinity.value_or(ct::AffinityConfig{});
            if (config.kalman) affinity.params = *config.kalman;
            affinity.location_kind = parse_affinity_flag(name);
            affinity.weight_speaker = w_speaker;
            affinity.weight_location = w_location;
            affinity.validate();

            std::vector<ct::AhcPath> paths;
            paths.reserve(meetings.size());
            for (const MeetingData& meeting : meetings) {
                paths.push_back(ct::cluster_path(meeting.segments, affinity));
            }
            for (double threshold : thresholds) {
                double error_sum = 0.0;
                double stationary_sum = 0.0;
                long stationary_count = 0;
                double moving_sum = 0.0;
                long moving_count = 0;
                for (std::size_t i = 0; i < meetings.size(); ++i) {
                    const auto labels = ct::labels_at_threshold(paths[i], threshold);
                    const ct::EvalReport report = ct::score(meetings[i].truth, labels);
                    error_sum += report.frame_error_rate;
                    if (report.stationary_error_rate) {
                        stationary_sum += *report.stationary_error_rate;
                        ++stationary_count;
                    }
                    if (report.moving_error_rate) {
                        moving_sum += *report.moving_error_rate;
                        ++moving_count;
                    }
                }
                const double mean_error = error_sum / meetings.size();
                const std::string mean_stationary =
                    stationary_count ? format_rate(stationary_sum / stationary_count) : "n/a";
                const std::string mean_moving =
                    moving_count ? format_rate(moving_sum / moving_count) : "n/a";
                std::snprintf(buffer, sizeof(buffer), "%s\t%.6g\t%.6g\t%.6g\t%.6f\t%s\t%s\n",
                              name.c_str(), w_speaker, w_location, threshold, mean_error,
                              mean_stationary.c_str(), mean_moving.c_str());
                out << buffer;
            }
        }
    }
    log_info("sweep: wrote %s", out_path.c_str());
    return 0;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> values;
    std::stringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) values.push_back(std::stod(item));
    }
    if (values.empty()) throw std::runtime_error("expected a comma-separated list, got '" + csv +
                                                 "'");
    return values;
}

int cmd_denominator_plot(const std::string& kappas_csv, const std::string& bins_csv, int n_eval,
                         const std::string& out_path) {
    const std::vector<double> kappas = parse_double_list(kappas_csv);
    const std::vector<double> bin_counts = parse_double_list(bins_csv);

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
    out << "kappa\tn_bins\tz\tvalue\tflatness\n";
    char buffer[160];
    for (double kappa : kappas) {
        for (double bins : bin_counts) {
            const int n_bins = static_cast<int>(bins);
            const ct::BinLayout layout(n_bins);
            const ct::DenominatorProfile profile =
                ct::denominator_profile(kappa, layout, n_eval);
            for (int k = 0; k < n_eval; ++k) {
                const double z = -std::numbers::pi + ct::kTwoPi * k / n_eval;
                std::snprintf(buffer, sizeof(buffer), "%.6g\t%d\t%.10g\t%.10g\t%.10g\n", kappa,
                              n_bins, z, profile.values[k], profile.flatness);
                out << buffer;
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Directional-statistics speaker tracking and diarization toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> affinity_flag;
    std::optional<std::string> weights_flag;
    std::optional<double> threshold_flag;

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic meeting");
    simulate->add_option("--config", config_path, "Config file (JSON)")->required();
    simulate->add_option("--out", out_path, "Output directory")->required();
    simulate->add_option("--seed", seed, "Override the config seed");

    auto* fit = app.add_subcommand("fit", "Estimate kappa_z and kappa_phi by EM");
    std::vector<std::string> fit_segments;
    fit->add_option("--segments", fit_segments, "Segments file(s) (JSON lines)")->required();
    fit->add_option("--config", config_path, "Config file (JSON)")->required();
    fit->add_option("--out", out_path, "Trace output file (TSV)")->required();

    auto* diarize = app.add_subcommand("diarize", "Cluster segments into speakers");
    std::string segments_path;
    std::optional<std::string> dendrogram_path;
    std::string meeting_name;
    diarize->add_option("--segments", segments_path, "Segments file (JSON lines)")->required();
    diarize->add_option("--config", config_path, "Config file (JSON)")->required();
    diarize->add_option("--out", out_path, "RTTM output file")->required();
    diarize->add_option("--dendrogram", dendrogram_path, "Merge list output (JSON)");
    diarize->add_option("--affinity", affinity_flag, "speaker|speaker+kl|speaker+track");
    diarize->add_option("--weights", weights_flag, "w_speaker,w_location");
    diarize->add_option("--threshold", threshold_flag, "Stopping threshold");
    diarize->add_option("--meeting", meeting_name, "Meeting name for RTTM output");

    auto* eval = app.add_subcommand("eval", "Score diarization output against ground truth");
    std::string rttm_path;
    std::string truth_path;
    std::optional<std::string> report_path;
    eval->add_option("--rttm", rttm_path, "RTTM file from diarize")->required();
    eval->add_option("--truth", truth_path, "Ground-truth file (JSON)")->required();
    eval->add_option("--out", report_path, "Report output file");

    auto* sweep = app.add_subcommand("sweep", "Sweep affinity weights and thresholds");
    sweep->add_option("--config", config_path, "Config file with a 'sweep' section")->required();
    sweep->add_option("--out", out_path, "Result table (TSV)")->required();

    auto* denom = app.add_subcommand("denominator-plot",
                                     "Tabulate the discretized von Mises normalizer profile");
    std::string kappas_csv = "0.1,1,10,100";
    std::string bins_csv = "8,360";
    int n_eval = 256;
    denom->add_option("--kappas", kappas_csv, "Comma-separated concentrations");
    denom->add_option("--bins", bins_csv, "Comma-separated bin counts");
    denom->add_option("--n-eval", n_eval, "Evaluation points per profile");
    denom->add_option("--out", out_path, "Output table (TSV)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(config_path, out_path, seed);
        if (fit->parsed()) return cmd_fit(fit_segments, config_path, out_path);
        if (diarize->parsed()) {
            return cmd_diarize(segments_path, config_path, out_path, dendrogram_path,
                               affinity_flag, weights_flag, threshold_flag, meeting_name);
        }
        if (eval->parsed()) return cmd_eval(rttm_path, truth_path, report_path);
        if (sweep->parsed()) return cmd_sweep(config_path, out_path);
        if (denom->parsed()) return cmd_denominator_plot(kappas_csv, bins_csv, n_eval, out_path);
    } catch (const ct::NoUsableSequenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
