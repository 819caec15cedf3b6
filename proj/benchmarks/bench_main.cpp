#include <benchmark/benchmark.h>

#include "modelavg/experiments.hpp"

using namespace modelavg;

namespace {

Dataset sample_dataset(std::size_t n) {
    auto rng = RandomStream::derive(1, {kResponseDomain, 0, 0});
    return generate_response(frozen_design(1, n), {1.0, 0.2, 1.0}, rng);
}

void BM_EstimateAll(benchmark::State& state) {
    const auto data = sample_dataset(static_cast<std::size_t>(state.range(0)));
    EstimatorSettings settings;
    settings.with_exact_posterior = state.range(1) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(settings.estimate(data));
}
BENCHMARK(BM_EstimateAll)->Args({50, 0})->Args({50, 1})->Args({800, 1});

void BM_PairedBootstrap(benchmark::State& state) {
    const auto data = sample_dataset(50);
    const EstimatorSettings settings{.with_exact_posterior = false};
    const EstimatorProcedure ama = [&](const Dataset& d) { return settings.estimate(d).ama; };
    const auto plan = ResamplePlan::bootstrap(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(paired_bootstrap(data, ama, plan, RandomStream(3)));
}
BENCHMARK(BM_PairedBootstrap)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_KsTwoSample(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RandomStream rng(4);
    std::vector<double> a(n), b(n);
    for (auto& v : a) v = rng.normal();
    for (auto& v : b) v = rng.normal() + 0.1;
    const EmpiricalSample sa(std::move(a)), sb(std::move(b));
    for (auto _ : state) benchmark::DoNotOptimize(ks_two_sample(sa, sb));
}
BENCHMARK(BM_KsTwoSample)->Arg(500)->Arg(5000);

void BM_MseCurvePoint(benchmark::State& state) {
    Scenario s{frozen_design(1, 50), {1.0, 0.2, 1.0}, {}, static_cast<std::size_t>(state.range(0)), 1, 0, 1};
    s.settings.with_exact_posterior = false;
    const std::vector<double> grid = {0.2};
    for (auto _ : state) benchmark::DoNotOptimize(mse_curve(grid, s));
}
BENCHMARK(BM_MseCurvePoint)->Arg(5000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
