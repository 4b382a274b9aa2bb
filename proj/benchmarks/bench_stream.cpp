// Microbenchmarks for the four bandwidth kernels at cache-ladder sizes.
// These time the raw loops through google-benchmark's own harness, as a
// cross-check on the suite's internal measure() numbers.

#include <benchmark/benchmark.h>

#include "membench/stream.hpp"

using namespace membench;

namespace {

void bench_kind(benchmark::State& state, StreamKind kind) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    StreamArrays arrays = StreamArrays::make(n, 1);
    const StreamKindInfo& info = stream_kind_info(kind);
    for (auto _ : state) {
        switch (kind) {
            case StreamKind::Copy:
                for (std::size_t i = 0; i < n; ++i) arrays.a[i] = arrays.b[i];
                break;
            case StreamKind::Scale:
                for (std::size_t i = 0; i < n; ++i) arrays.a[i] = arrays.d * arrays.b[i];
                break;
            case StreamKind::Sum:
                for (std::size_t i = 0; i < n; ++i) arrays.a[i] = arrays.b[i] + arrays.c[i];
                break;
            case StreamKind::Triad:
                for (std::size_t i = 0; i < n; ++i)
                    arrays.a[i] = arrays.b[i] + arrays.d * arrays.c[i];
                break;
        }
        benchmark::DoNotOptimize(arrays.a.data());
        benchmark::ClobberMemory();
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n) * info.bytes_per_iter);
}

void args(benchmark::internal::Benchmark* b) {
    // L1-, L2- and DRAM-sized working sets.
    b->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 22);
}

}  // namespace

BENCHMARK_CAPTURE(bench_kind, copy, StreamKind::Copy)->Apply(args);
BENCHMARK_CAPTURE(bench_kind, scale, StreamKind::Scale)->Apply(args);
BENCHMARK_CAPTURE(bench_kind, sum, StreamKind::Sum)->Apply(args);
BENCHMARK_CAPTURE(bench_kind, triad, StreamKind::Triad)->Apply(args);

BENCHMARK_MAIN();
