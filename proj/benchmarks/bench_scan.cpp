#include <benchmark/benchmark.h>

#include "cpboot/bootstrap.hpp"
#include "cpboot/parallel.hpp"
#include "cpboot/power.hpp"
#include "cpboot/scan.hpp"

#include <vector>

namespace {

cpboot::TimeSeries make_series(std::size_t n) {
    cpboot::RngStream rng(1);
    return cpboot::generate_amoc(n, n / 2, 2.0, 1.0, 0.0, 0.1, rng);
}

void BM_ScanChangepoint(benchmark::State& state) {
    const cpboot::TimeSeries series = make_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cpboot::scan_changepoint(series, 3).c_hat);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ScanChangepoint)->Range(64, 4096)->Complexity(benchmark::oN);

void BM_ResamplePairs(benchmark::State& state) {
    const cpboot::TimeSeries series = make_series(static_cast<std::size_t>(state.range(0)));
    cpboot::RngStream rng(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cpboot::resample_pairs(series, rng).size());
    }
}
BENCHMARK(BM_ResamplePairs)->Range(64, 4096);

void BM_BootstrapDistribution(benchmark::State& state) {
    const cpboot::TimeSeries series = make_series(100);
    cpboot::BootstrapConfig config;
    config.b_inner = static_cast<std::size_t>(state.range(0));
    const cpboot::RngStream rng(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            cpboot::bootstrap_changepoint_distribution(series, config, rng).values.back());
    }
}
BENCHMARK(BM_BootstrapDistribution)->Arg(100)->Arg(1000);

void BM_LambdaDistribution(benchmark::State& state) {
    const cpboot::TimeSeries series = make_series(100);
    cpboot::BootstrapConfig config;
    config.b_inner = 200;
    config.r_outer = static_cast<std::size_t>(state.range(0));
    const cpboot::RngStream rng(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cpboot::lambda_distribution(series, config, rng).back());
    }
}
BENCHMARK(BM_LambdaDistribution)->Arg(20)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
