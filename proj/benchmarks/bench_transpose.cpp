// Microbenchmarks for the in-place transposition ladder.

#include <benchmark/benchmark.h>

#include <thread>

#include "membench/timing.hpp"
#include "membench/transpose.hpp"

using namespace membench;

namespace {

void bench_variant(benchmark::State& state, TransposeVariant v) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t blk = 64;
    const int threads = std::max(1u, std::thread::hardware_concurrency());
    SquareMatrix m = SquareMatrix::random(n, 42);
    for (auto _ : state) {
        run_transpose(v, m, blk, threads);
        benchmark::DoNotOptimize(m.data.data());
        benchmark::ClobberMemory();
    }
    // Each transpose reads and writes every element once.
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * 2 *
                            static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n) * 8);
}

void args(benchmark::internal::Benchmark* b) {
    b->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK_CAPTURE(bench_variant, naive, TransposeVariant::Naive)->Apply(args);
BENCHMARK_CAPTURE(bench_variant, parallel, TransposeVariant::Parallel)->Apply(args);
BENCHMARK_CAPTURE(bench_variant, blocking, TransposeVariant::Blocking)->Apply(args);
BENCHMARK_CAPTURE(bench_variant, manual_blocking, TransposeVariant::ManualBlocking)->Apply(args);
BENCHMARK_CAPTURE(bench_variant, dynamic, TransposeVariant::Dynamic)->Apply(args);

BENCHMARK_MAIN();
