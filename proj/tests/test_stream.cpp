#include <doctest.h>

#include <cstring>
#include <string>

#include "membench/device_profile.hpp"
#include "membench/error.hpp"
#include "membench/stream.hpp"

using namespace membench;

namespace {

RepetitionPolicy fast_policy() {
    RepetitionPolicy p;
    p.warmup_runs = 1;
    p.measured_runs = 2;
    return p;
}

DeviceProfile tiny_profile() {
    DeviceProfile p;
    p.name = "tiny";
    p.core_count = 2;
    p.levels.push_back({"L1", 4096, false});
    p.levels.push_back({"DRAM", 64ull * 1024 * 1024, true});
    p.validate();
    return p;
}

}  // namespace

TEST_CASE("kind table carries the canonical traffic constants") {
    REQUIRE(kStreamKinds.size() == 4);
    CHECK(kStreamKinds[0].kind == StreamKind::Copy);
    CHECK(kStreamKinds[0].bytes_per_iter == 16);
    CHECK(kStreamKinds[0].flops_per_iter == 0);
    CHECK(std::strcmp(kStreamKinds[0].name, "copy") == 0);
    CHECK(kStreamKinds[1].kind == StreamKind::Scale);
    CHECK(kStreamKinds[1].bytes_per_iter == 16);
    CHECK(kStreamKinds[1].flops_per_iter == 1);
    CHECK(kStreamKinds[2].kind == StreamKind::Sum);
    CHECK(kStreamKinds[2].bytes_per_iter == 24);
    CHECK(kStreamKinds[2].flops_per_iter == 1);
    CHECK(kStreamKinds[3].kind == StreamKind::Triad);
    CHECK(kStreamKinds[3].bytes_per_iter == 24);
    CHECK(kStreamKinds[3].flops_per_iter == 2);

    CHECK(arrays_touched(StreamKind::Copy) == 2);
    CHECK(arrays_touched(StreamKind::Scale) == 2);
    CHECK(arrays_touched(StreamKind::Sum) == 3);
    CHECK(arrays_touched(StreamKind::Triad) == 3);

    CHECK(stream_kind_from_name("triad") == StreamKind::Triad);
    CHECK_THROWS_AS(stream_kind_from_name("quad"), ParameterError);
}

TEST_CASE("arrays are fully allocated and initialized up front") {
    const StreamArrays arr = StreamArrays::make(4096, 2);
    REQUIRE(arr.a.size() == 4096);
    REQUIRE(arr.b.size() == 4096);
    REQUIRE(arr.c.size() == 4096);
    CHECK(arr.d == 3.0);
    for (std::size_t i = 0; i < arr.a.size(); i += 1023) {
        CHECK(arr.a[i] == 0.25);
        CHECK(arr.b[i] == 1.0);
        CHECK(arr.c[i] == 2.0);
    }
    CHECK_THROWS_AS(StreamArrays::make(0, 1), ParameterError);
    CHECK_THROWS_AS(StreamArrays::make(4096, 0), ParameterError);
    CHECK_THROWS_AS(StreamArrays::make(1ull << 52, 1), ResourceError);
}

TEST_CASE("bandwidth follows bytes_per_iter * n / best_time") {
    TimingStats stats;
    stats.samples_s = {0.5, 1.0};
    stats.best_s = 0.5;
    stats.median_s = 1.0;
    stats.worst_s = 1.0;
    CHECK(bandwidth_from_stats(StreamKind::Copy, 1000, stats) == 32000.0);
    CHECK(bandwidth_from_stats(StreamKind::Triad, 1000, stats) == 48000.0);
    CHECK_THROWS_AS(bandwidth_from_stats(StreamKind::Copy, 0, stats), ParameterError);
}

TEST_CASE("timed kernels verify their defining formula") {
    // 4 kinds x 3 sizes; verification runs inside run_stream_test and
    // throws KernelError on any mismatch.
    for (const auto& info : kStreamKinds) {
        for (std::size_t n : {4096u, 10000u, 65536u}) {
            const BandwidthMeasurement m = run_stream_test(info.kind, n, 1, fast_policy());
            CHECK(m.n_elems == n);
            CHECK(m.best_bandwidth_Bps > 0.0);
            CHECK(m.stats.samples_s.size() == 2);
        }
    }
}

TEST_CASE("threaded runs produce the same verified results") {
    const BandwidthMeasurement m = run_stream_test(StreamKind::Triad, 50000, 4, fast_policy());
    CHECK(m.threads == 4);
    CHECK(m.best_bandwidth_Bps > 0.0);
}

TEST_CASE("working-set sizing per level") {
    DeviceProfile p;
    p.name = "sizer";
    p.core_count = 1;
    p.levels.push_back({"L1", 32768, false});
    p.levels.push_back({"L2", 2097152, false});
    p.levels.push_back({"DRAM", 1073741824, true});
    p.validate();

    // Fastest level: no lower bound, half the capacity as upper bound.
    CHECK(size_for_level(p.levels[0], p, StreamKind::Copy) == 1024);    // 16 KB / 16 B
    CHECK(size_for_level(p.levels[0], p, StreamKind::Triad) == 682);    // 16 KB / 24 B
    // Middle cache: largest working set that fits in half of it.
    CHECK(size_for_level(p.levels[1], p, StreamKind::Copy) == 65536);   // 1 MB / 16 B
    // Backing memory: 8x the last cache, clamped to the bounds.
    CHECK(size_for_level(p.levels[2], p, StreamKind::Copy) == 1048576); // 16 MB / 16 B

    // A level too close to its faster neighbor cannot be sized.
    DeviceProfile cramped;
    cramped.name = "cramped";
    cramped.core_count = 2;
    cramped.levels.push_back({"L1", 32768, false});
    cramped.levels.push_back({"L2", 131072, true});
    cramped.levels.push_back({"DRAM", 8ull * 1024 * 1024, true});
    cramped.validate();
    try {
        size_for_level(cramped.levels[1], cramped, StreamKind::Copy);
        FAIL("expected SizingError");
    } catch (const SizingError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("L2") != std::string::npos);
        CHECK(msg.find("L1") != std::string::npos);
    }
}

TEST_CASE("hierarchy sweep covers every level and kind") {
    const SweepResult result = run_hierarchy_sweep(tiny_profile(), fast_policy());
    CHECK(result.errors.empty());
    REQUIRE(result.measurements.size() == 8);

    int per_core = 0, shared = 0;
    for (const auto& m : result.measurements) {
        if (m.level == "L1") {
            CHECK(m.mode == StreamMode::SequentialScaled);
            CHECK(m.scaled_by_cores == 2);
            CHECK(m.threads == 1);
            ++per_core;
        } else {
            CHECK(m.level == "DRAM");
            CHECK(m.mode == StreamMode::Threaded);
            CHECK(m.scaled_by_cores == 1);
            CHECK(m.threads == 2);
            ++shared;
        }
        CHECK(m.best_bandwidth_Bps > 0.0);
    }
    CHECK(per_core == 4);
    CHECK(shared == 4);
}

TEST_CASE("sweep records unsizable levels and keeps going") {
    DeviceProfile cramped;
    cramped.name = "cramped";
    cramped.core_count = 1;
    cramped.levels.push_back({"L1", 32768, false});
    cramped.levels.push_back({"L2", 131072, true});
    cramped.levels.push_back({"DRAM", 8ull * 1024 * 1024, true});
    cramped.validate();

    const SweepResult result = run_hierarchy_sweep(cramped, fast_policy());
    CHECK(result.measurements.size() == 8);  // L1 and DRAM still measured
    REQUIRE(result.errors.size() == 4);      // one per kind at L2
    for (const auto& e : result.errors) {
        CHECK(e.level == "L2");
        CHECK(e.message.find("L2") != std::string::npos);
    }
}

TEST_CASE("copy/scale divergence yields a soft warning, not an error") {
    SweepResult r;
    BandwidthMeasurement copy;
    copy.kind = StreamKind::Copy;
    copy.level = "DRAM";
    copy.best_bandwidth_Bps = 100.0;
    BandwidthMeasurement scale = copy;
    scale.kind = StreamKind::Scale;
    scale.best_bandwidth_Bps = 50.0;
    r.measurements = {copy, scale};

    const auto warnings = sweep_soft_warnings(r);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("DRAM") != std::string::npos);

    r.measurements[1].best_bandwidth_Bps = 90.0;  // within 25%
    CHECK(sweep_soft_warnings(r).empty());
}

TEST_CASE("stream mode names") {
    CHECK(std::string(stream_mode_name(StreamMode::Threaded)) == "threaded");
    CHECK(std::string(stream_mode_name(StreamMode::SequentialScaled)) == "sequential_scaled");
}
