#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "membench/device_profile.hpp"
#include "membench/timing.hpp"

namespace membench {

/// The four canonical bandwidth tests.
enum class StreamKind { Copy, Scale, Sum, Triad };

struct StreamKindInfo {
    StreamKind kind;
    int bytes_per_iter;  // payload bytes crossing the memory boundary per index
    int flops_per_iter;
    const char* name;
};

/// Per-iteration traffic and arithmetic of each test. COPY and SCALE touch
/// two arrays (16 bytes), SUM and TRIAD three (24 bytes).
constexpr std::array<StreamKindInfo, 4> kStreamKinds{{
    {StreamKind::Copy, 16, 0, "copy"},
    {StreamKind::Scale, 16, 1, "scale"},
    {StreamKind::Sum, 24, 1, "sum"},
    {StreamKind::Triad, 24, 2, "triad"},
}};

const StreamKindInfo& stream_kind_info(StreamKind kind);
StreamKind stream_kind_from_name(const std::string& name);

/// Number of arrays a test touches (2 or 3).
int arrays_touched(StreamKind kind);

/// All three operand arrays plus the scalar. Everything is allocated and
/// initialized (first-touch, same partitioning as the timed loop) before
/// any timed run, regardless of which test runs.
struct StreamArrays {
    std::vector<double> a, b, c;
    double d = 3.0;

    static StreamArrays make(std::size_t n, int threads);
};

enum class StreamMode { Threaded, SequentialScaled };

const char* stream_mode_name(StreamMode mode);

/// One STREAM result. For per-core levels the kernel runs single-threaded
/// and best_bandwidth_Bps already carries the x core_count scaling, recorded
/// in scaled_by_cores.
struct BandwidthMeasurement {
    StreamKind kind = StreamKind::Copy;
    std::string level;  // memory level label, empty when run standalone
    StreamMode mode = StreamMode::Threaded;
    std::size_t n_elems = 0;
    double best_bandwidth_Bps = 0.0;
    int scaled_by_cores = 1;  // 1 when threaded
    int threads = 1;
    TimingStats stats;
};

/// Bandwidth from a timing result: bytes_per_iter * n / best time.
double bandwidth_from_stats(StreamKind kind, std::size_t n_elems, const TimingStats& stats);

/// Runs one kernel over freshly initialized arrays, partitioned in
/// contiguous static chunks over `threads` workers, and verifies every
/// output element against the defining formula afterwards (inputs are
/// exact in double, so the check is bit-exact). Throws KernelError on a
/// verification mismatch and ResourceError if allocation fails.
BandwidthMeasurement run_stream_test(StreamKind kind, std::size_t n_elems, int threads,
                                     const RepetitionPolicy& policy);

/// Array length for a test targeting one hierarchy level: the working set
/// must be at least 4x the next-faster level (so it cannot be cached there)
/// and at most half the target level (so it is not forced out). Throws
/// SizingError naming both levels when the bounds conflict.
std::size_t size_for_level(const MemoryLevel& level, const DeviceProfile& device, StreamKind kind);

struct SweepError {
    std::string level;
    std::optional<StreamKind> kind;
    std::string message;
};

struct SweepResult {
    std::vector<BandwidthMeasurement> measurements;
    std::vector<SweepError> errors;
};

/// Full hierarchy sweep: every declared level x all four kinds. Shared
/// levels run threaded with all cores; per-core levels run single-threaded
/// with the result multiplied by the core count. Sizing or kernel errors
/// for one level are recorded and the sweep continues.
SweepResult run_hierarchy_sweep(const DeviceProfile& device, const RepetitionPolicy& policy);

/// Soft sanity checks over sweep results (currently: COPY and SCALE should
/// agree within 25% per level). Returned as warning strings, never errors.
std::vector<std::string> sweep_soft_warnings(const SweepResult& result);

}  // namespace membench
