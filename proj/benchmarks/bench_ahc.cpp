#include <benchmark/benchmark.h>

#include "circletrack/ahc.hpp"
#include "circletrack/sim.hpp"

namespace {

using namespace circletrack;

Meeting make_meeting(int n_speakers, double seconds) {
    SimConfig config;
    config.n_speakers = n_speakers;
    config.meeting_seconds = seconds;
    config.n_bins = 360;
    config.embedding_dim = 128;
    config.moving_fraction = 0.5;
    config.move_step_concentration = 50.0;
    config.embedding_noise = 0.2;
    config.ssl_noise = 0.3;
    config.seed = 21;
    return simulate_meeting(config);
}

void BM_cluster_path_track(benchmark::State& state) {
    const Meeting meeting = make_meeting(4, static_cast<double>(state.range(0)));
    AffinityConfig config;
    config.weight_speaker = 1.0;
    config.weight_location = 0.5;
    config.location_kind = LocationKind::kTrack;
    config.params = KalmanParams(50.0, 20.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cluster_path(meeting.segments, config).merges.size());
    }
    state.SetItemsProcessed(state.iterations() * meeting.segments.size());
}
BENCHMARK(BM_cluster_path_track)->Arg(120)->Arg(240);

void BM_cluster_path_speaker_only(benchmark::State& state) {
    const Meeting meeting = make_meeting(4, 240.0);
    AffinityConfig config;
    config.weight_speaker = 1.0;
    config.weight_location = 0.0;
    config.location_kind = LocationKind::kNone;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cluster_path(meeting.segments, config).merges.size());
    }
}
BENCHMARK(BM_cluster_path_speaker_only);

}  // namespace
