#include <benchmark/benchmark.h>

#include <vector>

#include "circletrack/rng.hpp"
#include "circletrack/tracker.hpp"
#include "circletrack/von_mises.hpp"

namespace {

using namespace circletrack;

std::vector<FrameObservation> make_sequence(long frames, const KalmanParams& params) {
    Rng rng(7);
    std::vector<FrameObservation> sequence(frames);
    Angle state(0.0);
    for (long t = 0; t < frames; ++t) {
        if (t > 0) state = vm_sample(VonMises(state, params.kappa_z), rng);
        if (t % 5 == 4) continue;  // periodic unobserved frames
        sequence[t].measurements.push_back(
            Measurement::doa(vm_sample(VonMises(state, params.kappa_phi), rng)));
    }
    return sequence;
}

void BM_sequence_log_likelihood(benchmark::State& state) {
    const KalmanParams params(50.0, 20.0);
    const auto sequence = make_sequence(state.range(0), params);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sequence_log_likelihood(sequence, params).total_log_likelihood);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_sequence_log_likelihood)->Arg(100)->Arg(1000);

void BM_sparse_gap_prediction(benchmark::State& state) {
    const KalmanParams params(50.0, 20.0);
    std::vector<SparseFrame> stream;
    Rng rng(9);
    for (long t = 0; t < 50; ++t) {
        SparseFrame frame;
        frame.t_index = t * state.range(0);  // gap length between observations
        frame.obs.measurements.push_back(Measurement::doa(Angle(rng.uniform(-3.0, 3.0))));
        stream.push_back(std::move(frame));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(sparse_log_likelihood(stream, params).total_log_likelihood);
    }
}
BENCHMARK(BM_sparse_gap_prediction)->Arg(10)->Arg(1000);

}  // namespace
