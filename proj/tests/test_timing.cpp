#include <doctest.h>

#include <vector>

#include "membench/error.hpp"
#include "membench/timing.hpp"

using namespace membench;

namespace {

// Busy-wait so every sample is comfortably above clock resolution.
void spin_for_us(int us) {
    const double t0 = monotonic_now_s();
    while (monotonic_now_s() - t0 < static_cast<double>(us) * 1e-6) {
    }
}

}  // namespace

TEST_CASE("repetition policy validity") {
    RepetitionPolicy p;
    CHECK(p.valid());

    p.measured_runs = 0;
    CHECK_FALSE(p.valid());
    p.measured_runs = 1;
    CHECK(p.valid());

    p.warmup_runs = -1;
    CHECK_FALSE(p.valid());
    p.warmup_runs = 0;
    CHECK(p.valid());

    p.time_budget_s = 0.0;
    CHECK_FALSE(p.valid());
    p.time_budget_s = -1.0;
    CHECK_FALSE(p.valid());
    p.time_budget_s = 0.5;
    CHECK(p.valid());
}

TEST_CASE("timing stats from samples") {
    const TimingStats s = TimingStats::from_samples({3.0, 1.0, 2.0});
    CHECK(s.best_s == 1.0);
    CHECK(s.median_s == 2.0);
    CHECK(s.worst_s == 3.0);
    // Collection order survives for record output.
    CHECK(s.samples_s == std::vector<double>{3.0, 1.0, 2.0});

    const TimingStats single = TimingStats::from_samples({5.0});
    CHECK(single.best_s == 5.0);
    CHECK(single.median_s == 5.0);
    CHECK(single.worst_s == 5.0);

    // Even count: the lower-middle element.
    const TimingStats even = TimingStats::from_samples({4.0, 1.0, 3.0, 2.0});
    CHECK(even.median_s == 2.0);

    CHECK_THROWS_AS(TimingStats::from_samples({}), MeasurementError);
    CHECK_THROWS_AS(TimingStats::from_samples({0.0}), MeasurementError);
    CHECK_THROWS_AS(TimingStats::from_samples({-1.0, 2.0}), MeasurementError);
}

TEST_CASE("measure runs warmups unmeasured and counts samples") {
    int calls = 0;
    RepetitionPolicy p;
    p.warmup_runs = 2;
    p.measured_runs = 3;
    const TimingStats stats = measure(
        [&] {
            ++calls;
            spin_for_us(50);
        },
        p);
    CHECK(calls == 5);
    CHECK(stats.samples_s.size() == 3);
    CHECK(stats.best_s > 0.0);
    CHECK(stats.best_s <= stats.median_s);
    CHECK(stats.median_s <= stats.worst_s);
}

TEST_CASE("measure stops after the time budget with at least one sample") {
    int calls = 0;
    RepetitionPolicy p;
    p.warmup_runs = 1;
    p.measured_runs = 100;
    p.time_budget_s = 1e-9;  // instantly exhausted, but one sample is owed
    const TimingStats stats = measure(
        [&] {
            ++calls;
            spin_for_us(200);
        },
        p);
    CHECK(stats.samples_s.size() == 1);
    CHECK(calls == 2);  // one warmup + one measured run
}

TEST_CASE("measure rejects invalid policies") {
    RepetitionPolicy p;
    p.measured_runs = 0;
    CHECK_THROWS_AS(measure([] {}, p), ParameterError);
    p.measured_runs = 5;
    p.time_budget_s = -2.0;
    CHECK_THROWS_AS(measure([] {}, p), ParameterError);
}

TEST_CASE("monotonic clock is fine-grained and monotone") {
    const double res = clock_resolution_s();
    CHECK(res > 0.0);
    CHECK(res < 1e-6);
    CHECK_NOTHROW(require_fine_clock());

    const double t0 = monotonic_now_s();
    const double t1 = monotonic_now_s();
    CHECK(t1 >= t0);
}
