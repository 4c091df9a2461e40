#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <set>
#include <sstream>

#include "circletrack/io.hpp"
#include "circletrack/sim.hpp"

#ifndef CIRCLETRACK_CLI_PATH
#define CIRCLETRACK_CLI_PATH "circletrack"
#endif

using namespace circletrack;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("circletrack_test_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
    const std::string command =
        std::string(CIRCLETRACK_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

Meeting demo_meeting(std::uint64_t seed = 3) {
    SimConfig config;
    config.n_speakers = 3;
    config.meeting_seconds = 80.0;
    config.n_bins = 36;
    config.embedding_dim = 8;
    config.overlap_probability = 0.2;
    config.seed = seed;
    return simulate_meeting(config);
}

const std::string kDemoConfig = R"({
  "seed": 5,
  "sim": {"n_speakers": 3, "meeting_seconds": 80, "n_bins": 36, "embedding_dim": 8,
          "moving_fraction": 0.34, "move_step_concentration": 150.0,
          "embedding_noise": 0.05},
  "kalman": {"kappa_z": 30.0, "kappa_phi": 15.0},
  "affinity": {"weight_speaker": 1.0, "weight_location": 0.1,
               "location_kind": "track", "stop_threshold": 0.4},
  "em": {"max_iters": 3, "grid_size": 360}
})";

}  // namespace

TEST_CASE("segments file round trip") {
    TempDir dir;
    const Meeting meeting = demo_meeting();
    const std::string path = dir.file("segments.jsonl");
    io::write_segments(path, meeting.segments);
    const std::vector<SegmentRecord> loaded = io::read_segments(path);
    REQUIRE(loaded.size() == meeting.segments.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].id == meeting.segments[i].id);
        CHECK(loaded[i].channel == meeting.segments[i].channel);
        CHECK(loaded[i].start_s == meeting.segments[i].start_s);
        CHECK(loaded[i].embedding == meeting.segments[i].embedding);
        REQUIRE(loaded[i].frames.size() == meeting.segments[i].frames.size());
        for (std::size_t f = 0; f < loaded[i].frames.size(); ++f) {
            CHECK(loaded[i].frames[f].t_index == meeting.segments[i].frames[f].t_index);
            CHECK(loaded[i].frames[f].ssl == meeting.segments[i].frames[f].ssl);
            CHECK(loaded[i].frames[f].doa == meeting.segments[i].frames[f].doa);
        }
    }
}

TEST_CASE("truth file round trip") {
    TempDir dir;
    const Meeting meeting = demo_meeting();
    const std::string path = dir.file("truth.json");
    io::write_truth(path, meeting.truth);
    const GroundTruth loaded = io::read_truth(path);
    REQUIRE(loaded.speakers.size() == meeting.truth.speakers.size());
    REQUIRE(loaded.segments.size() == meeting.truth.segments.size());
    CHECK(loaded.speakers[0].trajectory == meeting.truth.speakers[0].trajectory);
    CHECK(loaded.segments[0].observed_frames == meeting.truth.segments[0].observed_frames);
}

TEST_CASE("rttm round trip and malformed input") {
    TempDir dir;
    const std::vector<io::RttmLine> lines = {
        {"meet", 0, 0.0, 1.932, "0"},
        {"meet", 1, 2.332, 1.358, "speakerB"},
    };
    const std::string path = dir.file("out.rttm");
    io::write_rttm(path, lines);
    const auto loaded = io::read_rttm(path);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].meeting == "meet");
    CHECK(loaded[0].dur_s == doctest::Approx(1.932));
    CHECK(loaded[1].label == "speakerB");

    write_file(dir.file("bad.rttm"), "SPEAKER only three fields\n");
    CHECK_THROWS(io::read_rttm(dir.file("bad.rttm")));
}

TEST_CASE("readers reject unknown keys and bad JSON") {
    TempDir dir;
    write_file(dir.file("bad.jsonl"),
               R"({"id":"a","channel":0,"start_s":0,"end_s":1,"embedding":[1],"frames":[],"extra":1})"
               "\n");
    CHECK_THROWS(io::read_segments(dir.file("bad.jsonl")));
    write_file(dir.file("broken.jsonl"), "{not json\n");
    CHECK_THROWS(io::read_segments(dir.file("broken.jsonl")));
    CHECK_THROWS(io::read_segments(dir.file("missing.jsonl")));
}

TEST_CASE("cli: simulate is byte-deterministic and honors n_speakers") {
    TempDir dir;
    write_file(dir.file("config.json"), kDemoConfig);
    REQUIRE(run_cli("simulate --config " + dir.file("config.json") + " --out " + dir.file("a")) ==
            0);
    REQUIRE(run_cli("simulate --config " + dir.file("config.json") + " --out " + dir.file("b")) ==
            0);
    CHECK(slurp(dir.file("a/segments.jsonl")) == slurp(dir.file("b/segments.jsonl")));
    CHECK(slurp(dir.file("a/truth.json")) == slurp(dir.file("b/truth.json")));

    const GroundTruth truth = io::read_truth(dir.file("a/truth.json"));
    CHECK(truth.speakers.size() == 3);

    // A different seed changes the output.
    REQUIRE(run_cli("simulate --config " + dir.file("config.json") + " --seed 99 --out " +
                    dir.file("c")) == 0);
    CHECK(slurp(dir.file("a/segments.jsonl")) != slurp(dir.file("c/segments.jsonl")));
}

TEST_CASE("cli: missing or malformed config exits 2") {
    TempDir dir;
    CHECK(run_cli("simulate --config " + dir.file("nope.json") + " --out " + dir.file("x")) == 2);
    write_file(dir.file("unknown.json"), R"({"seed": 1, "simulation": {}})");
    CHECK(run_cli("simulate --config " + dir.file("unknown.json") + " --out " + dir.file("x")) ==
          2);
    write_file(dir.file("nosim.json"), R"({"seed": 1})");
    CHECK(run_cli("simulate --config " + dir.file("nosim.json") + " --out " + dir.file("x")) ==
          2);
}

TEST_CASE("cli: fit writes a trace and flags unusable input") {
    TempDir dir;
    write_file(dir.file("config.json"), kDemoConfig);
    REQUIRE(run_cli("simulate --config " + dir.file("config.json") + " --out " + dir.file("m")) ==
            0);

    std::string one_iter = kDemoConfig;
    const auto pos = one_iter.find("\"max_iters\": 3");
    REQUIRE(pos != std::string::npos);
    one_iter.replace(pos, 14, "\"max_iters\": 1");
    write_file(dir.file("one.json"), one_iter);
    REQUIRE(run_cli("fit --segments " + dir.file("m/segments.jsonl") + " --config " +
                    dir.file("one.json") + " --out " + dir.file("trace.tsv")) == 0);
    const std::string trace = slurp(dir.file("trace.tsv"));
    CHECK(std::count(trace.begin(), trace.end(), '\n') == 2);  // header + one row

    // Segments without observations: exit 3.
    std::vector<SegmentRecord> bare = demo_meeting().segments;
    for (SegmentRecord& seg : bare) seg.frames.clear();
    io::write_segments(dir.file("bare.jsonl"), bare);
    CHECK(run_cli("fit --segments " + dir.file("bare.jsonl") + " --config " +
                  dir.file("config.json") + " --out " + dir.file("t2.tsv")) == 3);
}

TEST_CASE("cli: fit recovers the generating concentrations from a meeting") {
    TempDir dir;
    write_file(dir.file("config.json"), R"({
  "seed": 23,
  "sim": {"n_speakers": 2, "meeting_seconds": 400, "n_bins": 72, "embedding_dim": 8,
          "kappa_z_true": 20.0, "kappa_phi_true": 20.0, "observation": "doa",
          "moving_fraction": 1.0, "move_step_concentration": 20.0,
          "min_region_dwell_s": 2.0,
          "segment_length_median_s": 4.0, "gap_factor": 0.25},
  "kalman": {"kappa_z": 5.0, "kappa_phi": 5.0},
  "em": {"max_iters": 30, "grid_size": 360, "min_rel_improvement": 1e-6}
})");
    REQUIRE(run_cli("simulate --config " + dir.file("config.json") + " --out " + dir.file("m")) ==
            0);
    REQUIRE(run_cli("fit --segments " + dir.file("m/segments.jsonl") + " --config " +
                    dir.file("config.json") + " --out " + dir.file("trace.tsv")) == 0);

    // Last trace row carries the final iterate.
    std::istringstream trace(slurp(dir.file("trace.tsv")));
    std::string line;
    std::string last;
    std::getline(trace, line);  // header
    while (std::getline(trace, line)) {
        if (!line.empty()) last = line;
    }
    std::istringstream fields(last);
    long iteration = 0;
    double kappa_z = 0.0;
    double kappa_phi = 0.0;
    const bool parsed = static_cast<bool>(fields >> iteration >> kappa_z >> kappa_phi);
    REQUIRE(parsed);
    CHECK(kappa_z == doctest::Approx(20.0).epsilon(0.25));
    CHECK(kappa_phi == doctest::Approx(20.0).epsilon(0.25));
}

TEST_CASE("cli: diarize covers every segment and kinds coincide at zero weight") {
    TempDir dir;
    write_file(dir.file("config.json"), kDemoConfig);
    REQUIRE(run_cli("simulate --config " + dir.file("config.json") + " --out " + dir.file("m")) ==
            0);

    // Huge threshold: every segment its own label.
    REQUIRE(run_cli("diarize --segments " + dir.file("m/segments.jsonl") + " --config " +
                    dir.file("config.json") + " --out " + dir.file("singletons.rttm") +
                    " --threshold 1e18") == 0);
    const auto lines = io::read_rttm(dir.file("singletons.rttm"));
    const auto segments = io::read_segments(dir.file("m/segments.jsonl"));
    REQUIRE(lines.size() == segments.size());
    std::set<std::string> labels;
    for (const auto& line : lines) labels.insert(line.label);
    CHECK(labels.size() == lines.size());

    // weight_location = 0: kl and track outputs are byte-identical.
    REQUIRE(run_cli("diarize --segments " + dir.file("m/segments.jsonl") + " --config " +
                    dir.file("config.json") + " --out " + dir.file("kl.rttm") +
                    " --affinity speaker+kl --weights 1,0") == 0);
    REQUIRE(run_cli("diarize --segments " + dir.file("m/segments.jsonl") + " --config " +
                    dir.file("config.json") + " --out " + dir.file("track.rttm") +
                    " --affinity speaker+track --weights 1,0") == 0);
    CHECK(slurp(dir.file("kl.rttm")) == slurp(dir.file("track.rttm")));

    // Dendrogram parses as a JSON array.
    REQUIRE(run_cli("diarize --segments " + dir.file("m/segments.jsonl") + " --config " +
                    dir.file("config.json") + " --out " + dir.file("d.rttm") +
                    " --dendrogram " + dir.file("dendro.json")) == 0);
    CHECK(slurp(dir.file("dendro.json")).front() == '[');
}

TEST_CASE("cli: eval round trip, perfect clustering, and label shuffling") {
    TempDir dir;
    write_file(dir.file("config.json"), kDemoConfig);
    REQUIRE(run_cli("simulate --config " + dir.file("config.json") + " --out " + dir.file("m")) ==
            0);
    REQUIRE(run_cli("diarize --segments " + dir.file("m/segments.jsonl") + " --config " +
                    dir.file("config.json") + " --out " + dir.file("out.rttm")) == 0);
    CHECK(run_cli("eval --rttm " + dir.file("out.rttm") + " --truth " + dir.file("m/truth.json") +
                  " --out " + dir.file("report.tsv")) == 0);

    // Perfect clustering: label each segment by its true speaker.
    const GroundTruth truth = io::read_truth(dir.file("m/truth.json"));
    const auto segments = io::read_segments(dir.file("m/segments.jsonl"));
    std::vector<io::RttmLine> perfect;
    std::vector<io::RttmLine> shuffled;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        io::RttmLine line;
        line.meeting = "m";
        line.channel = segments[i].channel;
        line.start_s = segments[i].start_s;
        line.dur_s = segments[i].end_s - segments[i].start_s;
        line.label = truth.segments[i].speaker;
        perfect.push_back(line);
        line.label = "relabeled_" + line.label;
        shuffled.push_back(line);
    }
    io::write_rttm(dir.file("perfect.rttm"), perfect);
    io::write_rttm(dir.file("shuffled.rttm"), shuffled);
    REQUIRE(run_cli("eval --rttm " + dir.file("perfect.rttm") + " --truth " +
                    dir.file("m/truth.json") + " --out " + dir.file("p.tsv")) == 0);
    REQUIRE(run_cli("eval --rttm " + dir.file("shuffled.rttm") + " --truth " +
                    dir.file("m/truth.json") + " --out " + dir.file("s.tsv")) == 0);
    CHECK(slurp(dir.file("p.tsv")).find("average\t0.000000") != std::string::npos);
    CHECK(slurp(dir.file("p.tsv")) == slurp(dir.file("s.tsv")));
}

TEST_CASE("cli: sweep emits one row per grid point and is reproducible by diarize") {
    TempDir dir;
    write_file(dir.file("config.json"), kDemoConfig);
    REQUIRE(run_cli("simulate --config " + dir.file("config.json") + " --out " + dir.file("m")) ==
            0);

    const std::string sweep_config = R"({
  "seed": 5,
  "kalman": {"kappa_z": 30.0, "kappa_phi": 15.0},
  "sweep": {"meetings": [{"segments": ")" + dir.file("m/segments.jsonl") +
                                    R"(", "truth": ")" + dir.file("m/truth.json") + R"("}],
            "affinities": ["speaker"], "weights": [[1.0, 0.0]], "thresholds": [0.4]}
})";
    write_file(dir.file("sweep1.json"), sweep_config);
    REQUIRE(run_cli("sweep --config " + dir.file("sweep1.json") + " --out " + dir.file("s1.tsv")) ==
            0);
    const std::string s1 = slurp(dir.file("s1.tsv"));
    CHECK(std::count(s1.begin(), s1.end(), '\n') == 2);  // header + 1 row

    std::string grid4 = sweep_config;
    const auto tpos = grid4.find("\"thresholds\": [0.4]");
    REQUIRE(tpos != std::string::npos);
    grid4.replace(tpos, 19, "\"thresholds\": [0.2, 0.4, 0.6, 0.8]");
    write_file(dir.file("sweep4.json"), grid4);
    REQUIRE(run_cli("sweep --config " + dir.file("sweep4.json") + " --out " + dir.file("s4.tsv")) ==
            0);
    const std::string s4 = slurp(dir.file("s4.tsv"));
    CHECK(std::count(s4.begin(), s4.end(), '\n') == 5);

    // Replay the single sweep point through diarize + eval and compare.
    REQUIRE(run_cli("diarize --segments " + dir.file("m/segments.jsonl") + " --config " +
                    dir.file("config.json") + " --out " + dir.file("replay.rttm") +
                    " --affinity speaker --weights 1,0 --threshold 0.4") == 0);
    REQUIRE(run_cli("eval --rttm " + dir.file("replay.rttm") + " --truth " +
                    dir.file("m/truth.json") + " --out " + dir.file("replay.tsv")) == 0);
    const std::string sweep_row = slurp(dir.file("s1.tsv"));
    const std::string report = slurp(dir.file("replay.tsv"));
    const auto rate_pos = report.find("average\t");
    REQUIRE(rate_pos != std::string::npos);
    const std::string rate = report.substr(rate_pos + 8, 8);
    CHECK(sweep_row.find(rate) != std::string::npos);
}

TEST_CASE("cli: denominator-plot row counts and flatness ordering") {
    TempDir dir;
    REQUIRE(run_cli("denominator-plot --kappas 1,100 --bins 8,360 --n-eval 32 --out " +
                    dir.file("d.tsv")) == 0);
    const std::string table = slurp(dir.file("d.tsv"));
    CHECK(std::count(table.begin(), table.end(), '\n') == 1 + 4 * 32);

    double flat_low = -1.0;
    double flat_high = -1.0;
    std::istringstream rows(table);
    std::string line;
    std::getline(rows, line);  // header
    while (std::getline(rows, line)) {
        std::istringstream fields(line);
        double kappa;
        int bins;
        double z, value, flatness;
        fields >> kappa >> bins >> z >> value >> flatness;
        if (kappa == 1.0 && bins == 360) flat_low = flatness;
        if (kappa == 100.0 && bins == 8) flat_high = flatness;
    }
    REQUIRE(flat_low >= 0.0);
    REQUIRE(flat_high >= 0.0);
    CHECK(flat_high > flat_low);
}
