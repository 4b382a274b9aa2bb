// Microbenchmarks for the Gaussian blur ladder at a moderate image size.

#include <benchmark/benchmark.h>

#include <thread>

#include "membench/blur.hpp"
#include "membench/image_io.hpp"

using namespace membench;

namespace {

void bench_variant(benchmark::State& state, BlurVariant v) {
    const int f = static_cast<int>(state.range(0));
    const Image src = synth_image(SynthPattern::Random, 640, 480, 3, 42);
    const Gaussian1DKernel k1 = make_gaussian_kernel(f, default_sigma(f));
    const int threads = std::max(1u, std::thread::hardware_concurrency());
    for (auto _ : state) {
        Image out = run_blur(v, src, k1, threads);
        benchmark::DoNotOptimize(out.data.data());
        benchmark::ClobberMemory();
    }
    // Separable model: both passes stream the image in and out once.
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * 16 * 640 * 480 * 3);
}

void args(benchmark::internal::Benchmark* b) {
    b->Arg(5)->Arg(19)->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK_CAPTURE(bench_variant, naive, BlurVariant::Naive)->Apply(args);
BENCHMARK_CAPTURE(bench_variant, unit_stride, BlurVariant::UnitStride)->Apply(args);
BENCHMARK_CAPTURE(bench_variant, 1d_kernels, BlurVariant::Separable)->Apply(args);
BENCHMARK_CAPTURE(bench_variant, memory, BlurVariant::SeparableMem)->Apply(args);
BENCHMARK_CAPTURE(bench_variant, parallel, BlurVariant::Parallel)->Apply(args);

BENCHMARK_MAIN();
