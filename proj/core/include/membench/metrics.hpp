#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "membench/stream.hpp"

namespace membench {

/// Compulsory-traffic model: the bytes a workload must move between memory
/// and the CPU assuming perfect cache reuse (each datum crosses once per
/// logical pass). Write-allocate and conflict misses are deliberately not
/// modeled, so utilization reads as "fraction of streaming-optimal".
struct TrafficModel {
    std::string workload;
    std::uint64_t bytes_moved = 0;
};

/// In-place transpose: n*n doubles, each read once and written once.
TrafficModel transpose_traffic(std::size_t n);

/// Separable blur: two passes, each streaming the whole w*h*c float image
/// in and out once. The filter size affects time, not compulsory traffic;
/// it is kept in the label only.
TrafficModel blur_separable_traffic(std::size_t w, std::size_t h, std::size_t c, int f);

/// One STREAM kernel pass: bytes-per-iteration times the array length.
TrafficModel stream_traffic(StreamKind kind, std::size_t n);

/// Relative memory-bandwidth utilization of one run: achieved bytes/second
/// over the STREAM-measured baseline. Dimensionless, ideally in [0,1];
/// values above 1 (cache-resident working set, or model mismatch) are
/// reported as-is with the overflow flag raised, never clamped.
struct UtilizationRecord {
    std::string workload;
    double elapsed_s = 0.0;
    std::uint64_t bytes_moved = 0;
    double baseline_Bps = 0.0;
    double utilization = 0.0;
    bool overflow = false;
};

UtilizationRecord utilization(const TrafficModel& traffic, double elapsed_s,
                              double baseline_Bps);

/// Speedup of a variant relative to the naive implementation, t_naive over
/// t_variant. Slowdowns (< 1) are reported as-is.
struct SpeedupRecord {
    std::string variant;
    double t_naive_s = 0.0;
    double t_variant_s = 0.0;
    double speedup = 0.0;
};

SpeedupRecord speedup(double t_naive_s, double t_variant_s, const std::string& variant = "");

/// STREAM baselines for the utilization denominator, both taken at the
/// slowest (backing-memory) level as the maximum across the four kinds:
/// the threaded figure for parallel kernels, the single-core figure for
/// sequential ones.
struct BaselineSet {
    double threaded_Bps = 0.0;
    double single_core_Bps = 0.0;

    bool valid() const { return threaded_Bps > 0.0 && single_core_Bps > 0.0; }
    double pick(int threads) const;
};

/// Builds the baseline set from bandwidth measurements taken at the named
/// level: multi-threaded runs feed the threaded figure, single-threaded
/// runs the single-core figure. With one core the two coincide. Throws
/// ParameterError if no measurement at that level qualifies.
BaselineSet baselines_from_measurements(const std::vector<BandwidthMeasurement>& measurements,
                                        const std::string& dram_level);

}  // namespace membench
