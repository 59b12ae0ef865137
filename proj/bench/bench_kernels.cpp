// Parallel kernels against their serial references.

#include "semithermo/preimage_tree.hpp"
#include "semithermo/render.hpp"
#include "support/corpus.hpp"

#include <benchmark/benchmark.h>

using namespace semithermo;

namespace {

void BM_profile_parallel(benchmark::State& state)
{
    const auto spec = corpus::z2pm2();
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_profile(spec, SpherePoint(1.0), depth, depth - 3));
    }
}

void BM_profile_serial(benchmark::State& state)
{
    const auto spec = corpus::z2pm2();
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::build_profile(spec, SpherePoint(1.0), depth, depth - 3));
    }
}

void BM_weights_parallel(benchmark::State& state)
{
    const auto prof = build_profile(corpus::z2pm2(), SpherePoint(1.0), 10, 10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_sum_exp_weights(prof.level(10), 1.3));
    }
}

void BM_weights_serial(benchmark::State& state)
{
    const auto prof = build_profile(corpus::z2pm2(), SpherePoint(1.0), 10, 10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::log_sum_exp_weights(prof.level(10), 1.3));
    }
}

GridSpec grid(int n)
{
    GridSpec g;
    g.width = n;
    g.height = n;
    return g;
}

void BM_fiber_parallel(benchmark::State& state)
{
    const auto spec = corpus::z2pm2();
    const auto rule = WordRule::parse("periodic:12", 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(render_fiber(spec, rule, grid(static_cast<int>(state.range(0))), 200));
    }
}

void BM_fiber_serial(benchmark::State& state)
{
    const auto spec = corpus::z2pm2();
    const auto rule = WordRule::parse("periodic:12", 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reference::render_fiber(spec, rule, grid(static_cast<int>(state.range(0))), 200));
    }
}

} // namespace

BENCHMARK(BM_profile_parallel)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_profile_serial)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_weights_parallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_weights_serial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_fiber_parallel)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fiber_serial)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
