#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace membench {

/// How many repetitions a kernel gets before and during measurement.
///
/// Warm-up runs are executed but never recorded. Measured runs each produce
/// one wall-clock sample; the optional budget caps the total wall time spent
/// inside measure() once at least one sample exists.
struct RepetitionPolicy {
    int warmup_runs = 2;
    int measured_runs = 10;
    std::optional<double> time_budget_s{};

    bool valid() const {
        return measured_runs >= 1 && warmup_runs >= 0 &&
               (!time_budget_s || *time_budget_s > 0.0);
    }
};

/// Wall-clock samples of repeated kernel runs, in seconds.
/// best is the headline number: minimum time corresponds to the maximum
/// achieved bandwidth. median/worst are kept for diagnostics.
struct TimingStats {
    std::vector<double> samples_s;  // in collection order
    double best_s = 0.0;
    double worst_s = 0.0;
    double median_s = 0.0;

    // median over sorted samples; even count takes the lower-middle element
    static TimingStats from_samples(std::vector<double> samples);
};

/// Monotonic wall clock, seconds since an arbitrary epoch.
double monotonic_now_s();

/// Smallest positive delta observable between two clock reads, in seconds.
double clock_resolution_s();

/// Aborts with MeasurementError if the clock is coarser than 1 microsecond.
/// Timing numbers from a coarser clock would be noise, not data.
void require_fine_clock();

/// Runs `work` warmup_runs times unmeasured, then up to measured_runs timed
/// iterations. Stops early only when the time budget is exceeded and at
/// least one sample has been taken. Throws ParameterError on an invalid
/// policy and MeasurementError if no usable sample was collected.
TimingStats measure(const std::function<void()>& work, const RepetitionPolicy& policy);

/// Compiler barrier: forces the value (and anything reachable through it)
/// to be materialized, so kernels cannot be dead-code eliminated or hoisted
/// out of the measured loop.
template <typename T>
inline void do_not_optimize(T const& value) {
    asm volatile("" : : "r,m"(value) : "memory");
}

}  // namespace membench
