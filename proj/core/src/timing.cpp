#include "membench/timing.hpp"

#include <algorithm>
#include <chrono>

#include "membench/error.hpp"

namespace membench {

namespace {
using clock_type = std::chrono::steady_clock;

double to_seconds(clock_type::duration d) {
    return std::chrono::duration<double>(d).count();
}
}  // namespace

double monotonic_now_s() {
    return to_seconds(clock_type::now().time_since_epoch());
}

double clock_resolution_s() {
    // The type-level period lies on some platforms; observe the real tick.
    double min_delta = 1.0;
    for (int i = 0; i < 64; ++i) {
        auto t0 = clock_type::now();
        auto t1 = clock_type::now();
        while (t1 == t0) t1 = clock_type::now();
        min_delta = std::min(min_delta, to_seconds(t1 - t0));
    }
    return min_delta;
}

void require_fine_clock() {
    double res = clock_resolution_s();
    if (res > 1e-6) {
        throw MeasurementError(
            "monotonic clock resolution is " + std::to_string(res * 1e9) +
            " ns, coarser than the required 1 us; refusing to emit noise");
    }
}

TimingStats TimingStats::from_samples(std::vector<double> samples) {
    if (samples.empty()) {
        throw MeasurementError("no timing samples collected");
    }
    TimingStats stats;
    stats.samples_s = std::move(samples);
    std::vector<double> sorted = stats.samples_s;
    std::sort(sorted.begin(), sorted.end());
    stats.best_s = sorted.front();
    stats.worst_s = sorted.back();
    stats.median_s = sorted[(sorted.size() - 1) / 2];
    if (stats.best_s <= 0.0) {
        throw MeasurementError("non-positive timing sample; work is too fast for the clock");
    }
    return stats;
}

TimingStats measure(const std::function<void()>& work, const RepetitionPolicy& policy) {
    if (!policy.valid()) {
        throw ParameterError("invalid repetition policy: need measured_runs >= 1, "
                             "warmup_runs >= 0, time_budget > 0 when present");
    }
    const auto start = clock_type::now();

    for (int i = 0; i < policy.warmup_runs; ++i) {
        work();
    }

    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(policy.measured_runs));
    for (int i = 0; i < policy.measured_runs; ++i) {
        auto t0 = clock_type::now();
        work();
        auto t1 = clock_type::now();
        samples.push_back(to_seconds(t1 - t0));
        if (policy.time_budget_s && !samples.empty() &&
            to_seconds(t1 - start) > *policy.time_budget_s) {
            break;
        }
    }
    return TimingStats::from_samples(std::move(samples));
}

}  // namespace membench
