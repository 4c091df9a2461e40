#include "circletrack/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace circletrack::io {

namespace {

using nlohmann::ordered_json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

void check_keys(const ordered_json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
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

ordered_json parse(const std::string& text, const std::string& where) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("invalid JSON in " + where + ": " + e.what());
    }
}

}  // namespace

void write_segments(const std::string& path, const std::vector<SegmentRecord>& segments) {
    std::ofstream out = open_out(path);
    for (const SegmentRecord& seg : segments) {
        ordered_json j;
        j["id"] = seg.id;
        j["channel"] = seg.channel;
        j["start_s"] = seg.start_s;
        j["end_s"] = seg.end_s;
        j["embedding"] = seg.embedding;
        ordered_json frames = ordered_json::array();
        for (const FrameRecord& frame : seg.frames) {
            ordered_json f;
            f["t_index"] = frame.t_index;
            if (!frame.ssl.empty()) {
                f["ssl"] = frame.ssl;
            } else if (frame.doa.has_value()) {
                f["doa"] = *frame.doa;
            }
            frames.push_back(std::move(f));
        }
        j["frames"] = std::move(frames);
        out << j.dump() << '\n';
    }
}

std::vector<SegmentRecord> read_segments(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<SegmentRecord> segments;
    std::string line;
    long line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(line_number);
        const ordered_json j = parse(line, where);
        check_keys(j, {"id", "channel", "start_s", "end_s", "embedding", "frames"}, where);
        SegmentRecord seg;
        seg.id = j.at("id").get<std::string>();
        seg.channel = j.at("channel").get<int>();
        seg.start_s = j.at("start_s").get<double>();
        seg.end_s = j.at("end_s").get<double>();
        seg.embedding = j.at("embedding").get<std::vector<double>>();
        for (const ordered_json& f : j.at("frames")) {
            check_keys(f, {"t_index", "ssl", "doa"}, where);
            FrameRecord frame;
            frame.t_index = f.at("t_index").get<long>();
            if (f.contains("ssl") && !f.at("ssl").is_null()) {
                frame.ssl = f.at("ssl").get<std::vector<double>>();
            }
            if (f.contains("doa") && !f.at("doa").is_null()) {
                frame.doa = f.at("doa").get<double>();
            }
            seg.frames.push_back(std::move(frame));
        }
        segments.push_back(std::move(seg));
    }
    return segments;
}

void write_truth(const std::string& path, const GroundTruth& truth) {
    ordered_json j;
    ordered_json speakers = ordered_json::array();
    for (const TruthSpeaker& spk : truth.speakers) {
        ordered_json s;
        s["id"] = spk.id;
        s["moving"] = spk.moving;
        ordered_json trajectory = ordered_json::array();
        for (const auto& [t, angle] : spk.trajectory) {
            trajectory.push_back(ordered_json::array({t, angle}));
        }
        s["trajectory"] = std::move(trajectory);
        speakers.push_back(std::move(s));
    }
    j["speakers"] = std::move(speakers);
    ordered_json segments = ordered_json::array();
    for (const TruthSegment& seg : truth.segments) {
        ordered_json s;
        s["id"] = seg.id;
        s["speaker"] = seg.speaker;
        s["channel"] = seg.channel;
        s["start_s"] = seg.start_s;
        s["end_s"] = seg.end_s;
        s["observed_frames"] = seg.observed_frames;
        segments.push_back(std::move(s));
    }
    j["segments"] = std::move(segments);
    std::ofstream out = open_out(path);
    out << j.dump() << '\n';
}

GroundTruth read_truth(const std::string& path) {
    std::ifstream in = open_in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const ordered_json j = parse(buffer.str(), path);
    check_keys(j, {"speakers", "segments"}, path);
    GroundTruth truth;
    for (const ordered_json& s : j.at("speakers")) {
        check_keys(s, {"id", "moving", "trajectory"}, path);
        TruthSpeaker spk;
        spk.id = s.at("id").get<std::string>();
        spk.moving = s.at("moving").get<bool>();
        for (const ordered_json& pair : s.at("trajectory")) {
            spk.trajectory.emplace_back(pair.at(0).get<long>(), pair.at(1).get<double>());
        }
        truth.speakers.push_back(std::move(spk));
    }
    for (const ordered_json& s : j.at("segments")) {
        check_keys(s, {"id", "speaker", "channel", "start_s", "end_s", "observed_frames"}, path);
        TruthSegment seg;
        seg.id = s.at("id").get<std::string>();
        seg.speaker = s.at("speaker").get<std::string>();
        seg.channel = s.at("channel").get<int>();
        seg.start_s = s.at("start_s").get<double>();
        seg.end_s = s.at("end_s").get<double>();
        seg.observed_frames = s.at("observed_frames").get<std::vector<long>>();
        truth.segments.push_back(std::move(seg));
    }
    return truth;
}

void write_rttm(const std::string& path, const std::vector<RttmLine>& lines) {
    std::ofstream out = open_out(path);
    char buffer[64];
    for (const RttmLine& line : lines) {
        out << "SPEAKER " << line.meeting << ' ' << line.channel;
        std::snprintf(buffer, sizeof(buffer), " %.3f %.3f ", line.start_s, line.dur_s);
        out << buffer << line.label << '\n';
    }
}

std::vector<RttmLine> read_rttm(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<RttmLine> lines;
    std::string text;
    long line_number = 0;
    while (std::getline(in, text)) {
        ++line_number;
        if (text.empty()) continue;
        std::istringstream row(text);
        std::string tag;
        RttmLine line;
        if (!(row >> tag >> line.meeting >> line.channel >> line.start_s >> line.dur_s >>
              line.label) ||
            tag != "SPEAKER") {
            throw std::runtime_error("malformed RTTM line " + std::to_string(line_number) +
                                     " in " + path);
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

void write_dendrogram(const std::string& path, const std::vector<MergeRecord>& merges) {
    ordered_json j = ordered_json::array();
    for (const MergeRecord& merge : merges) {
        j.push_back(ordered_json::array({merge.step, merge.id_a, merge.id_b, merge.affinity}));
    }
    std::ofstream out = open_out(path);
    out << j.dump() << '\n';
}

}  // namespace circletrack::io
