#include "membench/metrics.hpp"

#include <algorithm>

#include "membench/error.hpp"

namespace membench {

TrafficModel transpose_traffic(std::size_t n) {
    if (n == 0) throw ParameterError("matrix size must be positive");
    TrafficModel t;
    t.workload = "transpose(n=" + std::to_string(n) + ")";
    // Each of the n^2 doubles is read once and written once.
    t.bytes_moved = 2ull * 8ull * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
    return t;
}

TrafficModel blur_separable_traffic(std::size_t w, std::size_t h, std::size_t c, int f) {
    if (w == 0 || h == 0 || c == 0) throw ParameterError("image dimensions must be positive");
    if (f < 1 || f % 2 == 0) throw ParameterError("filter size must be a positive odd number");
    TrafficModel t;
    t.workload = "blur_separable(w=" + std::to_string(w) + ",h=" + std::to_string(h) +
                 ",c=" + std::to_string(c) + ",f=" + std::to_string(f) + ")";
    // Two passes; each streams the full float image in and out once.
    t.bytes_moved = 2ull * (2ull * static_cast<std::uint64_t>(w) * static_cast<std::uint64_t>(h) *
                            static_cast<std::uint64_t>(c) * 4ull);
    return t;
}

TrafficModel stream_traffic(StreamKind kind, std::size_t n) {
    if (n == 0) throw ParameterError("stream array length must be positive");
    const auto& info = stream_kind_info(kind);
    TrafficModel t;
    t.workload = std::string("stream(") + info.name + ",n=" + std::to_string(n) + ")";
    t.bytes_moved = static_cast<std::uint64_t>(info.bytes_per_iter) * static_cast<std::uint64_t>(n);
    return t;
}

UtilizationRecord utilization(const TrafficModel& traffic, double elapsed_s,
                              double baseline_Bps) {
    if (traffic.bytes_moved == 0) throw ParameterError("traffic model has zero bytes");
    if (!(elapsed_s > 0.0)) throw ParameterError("elapsed time must be positive");
    if (!(baseline_Bps > 0.0)) throw ParameterError("stream baseline must be positive");
    UtilizationRecord r;
    r.workload = traffic.workload;
    r.elapsed_s = elapsed_s;
    r.bytes_moved = traffic.bytes_moved;
    r.baseline_Bps = baseline_Bps;
    r.utilization = (static_cast<double>(traffic.bytes_moved) / elapsed_s) / baseline_Bps;
    r.overflow = r.utilization > 1.0;
    return r;
}

SpeedupRecord speedup(double t_naive_s, double t_variant_s, const std::string& variant) {
    if (!(t_naive_s > 0.0) || !(t_variant_s > 0.0)) {
        throw ParameterError("speedup requires positive times");
    }
    SpeedupRecord r;
    r.variant = variant;
    r.t_naive_s = t_naive_s;
    r.t_variant_s = t_variant_s;
    r.speedup = t_naive_s / t_variant_s;
    return r;
}

double BaselineSet::pick(int threads) const {
    if (threads < 1) throw ParameterError("thread count must be at least 1");
    const double chosen = threads > 1 ? threaded_Bps : single_core_Bps;
    if (!(chosen > 0.0)) {
        throw ParameterError(std::string("no ") + (threads > 1 ? "threaded" : "single-core") +
                             " stream baseline available");
    }
    return chosen;
}

BaselineSet baselines_from_measurements(const std::vector<BandwidthMeasurement>& measurements,
                                        const std::string& dram_level) {
    BaselineSet set;
    for (const auto& m : measurements) {
        if (m.level != dram_level || m.scaled_by_cores != 1) continue;
        if (m.threads > 1) {
            set.threaded_Bps = std::max(set.threaded_Bps, m.best_bandwidth_Bps);
        } else {
            set.single_core_Bps = std::max(set.single_core_Bps, m.best_bandwidth_Bps);
        }
    }
    if (set.threaded_Bps == 0.0 && set.single_core_Bps == 0.0) {
        throw ParameterError("no usable stream baseline at level '" + dram_level + "'");
    }
    // A single-core device's one-thread runs are its threaded mode too.
    if (set.threaded_Bps == 0.0) set.threaded_Bps = set.single_core_Bps;
    return set;
}

}  // namespace membench
