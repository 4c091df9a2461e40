#include <benchmark/benchmark.h>

#include <vector>

#include "circletrack/circular_grid.hpp"
#include "circletrack/em.hpp"
#include "circletrack/rng.hpp"
#include "circletrack/von_mises.hpp"

namespace {

using namespace circletrack;

std::vector<FrameObservation> make_sequence(long frames, const KalmanParams& params) {
    Rng rng(11);
    std::vector<FrameObservation> sequence(frames);
    Angle state(0.0);
    for (long t = 0; t < frames; ++t) {
        if (t > 0) state = vm_sample(VonMises(state, params.kappa_z), rng);
        if (t % 4 == 3) continue;
        sequence[t].measurements.push_back(
            Measurement::doa(vm_sample(VonMises(state, params.kappa_phi), rng)));
    }
    return sequence;
}

void BM_smooth_posteriors(benchmark::State& state) {
    const KalmanParams params(50.0, 20.0);
    const auto sequence = make_sequence(500, params);
    const int grid_size = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(smooth_posteriors(sequence, params, grid_size).posteriors.size());
    }
    state.SetItemsProcessed(state.iterations() * 500);
}
BENCHMARK(BM_smooth_posteriors)->Arg(360)->Arg(720);

void BM_transition_convolver(benchmark::State& state) {
    const CircularGrid grid(720);
    const TransitionConvolver conv(grid, static_cast<double>(state.range(0)));
    std::vector<double> in(720, 1.0 / 720);
    std::vector<double> out(720);
    for (auto _ : state) {
        conv.convolve(in, out);
        benchmark::DoNotOptimize(out[0]);
    }
}
BENCHMARK(BM_transition_convolver)->Arg(2)->Arg(50)->Arg(500);

}  // namespace
