#include <benchmark/benchmark.h>

#include "circletrack/bessel.hpp"

namespace {

void BM_log_bessel_i0_series(benchmark::State& state) {
    double kappa = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(circletrack::log_bessel_i0(kappa));
        kappa = kappa < 14.0 ? kappa + 0.37 : 0.1;
    }
}
BENCHMARK(BM_log_bessel_i0_series);

void BM_log_bessel_i0_asymptotic(benchmark::State& state) {
    double kappa = 20.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(circletrack::log_bessel_i0(kappa));
        kappa = kappa < 1e5 ? kappa * 1.01 : 20.0;
    }
}
BENCHMARK(BM_log_bessel_i0_asymptotic);

void BM_inv_bessel_ratio(benchmark::State& state) {
    double r = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(circletrack::inv_bessel_ratio(r));
        r = r < 0.99 ? r + 0.013 : 0.01;
    }
}
BENCHMARK(BM_inv_bessel_ratio);

}  // namespace
