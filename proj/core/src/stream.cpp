#include "membench/stream.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <new>

#include "membench/error.hpp"

namespace membench {

namespace {

std::string format_bps(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
}

}  // namespace

const StreamKindInfo& stream_kind_info(StreamKind kind) {
    for (const auto& info : kStreamKinds) {
        if (info.kind == kind) return info;
    }
    throw ParameterError("unknown stream kind");
}

StreamKind stream_kind_from_name(const std::string& name) {
    for (const auto& info : kStreamKinds) {
        if (name == info.name) return info.kind;
    }
    throw ParameterError("unknown stream kind name: " + name);
}

int arrays_touched(StreamKind kind) {
    return (kind == StreamKind::Copy || kind == StreamKind::Scale) ? 2 : 3;
}

const char* stream_mode_name(StreamMode mode) {
    return mode == StreamMode::Threaded ? "threaded" : "sequential_scaled";
}

StreamArrays StreamArrays::make(std::size_t n, int threads) {
    if (n == 0) throw ParameterError("stream array length must be positive");
    if (threads < 1) throw ParameterError("thread count must be at least 1");
    StreamArrays arr;
    try {
        arr.a.resize(n);
        arr.b.resize(n);
        arr.c.resize(n);
    } catch (const std::bad_alloc&) {
        throw ResourceError("cannot allocate stream arrays for n=" + std::to_string(n));
    } catch (const std::length_error&) {
        throw ResourceError("cannot allocate stream arrays for n=" + std::to_string(n));
    }
    double* a = arr.a.data();
    double* b = arr.b.data();
    double* c = arr.c.data();
    const std::int64_t len = static_cast<std::int64_t>(n);
    // First-touch initialization with the same partitioning as the timed
    // loops, so pages land on the NUMA node that later works on them.
#pragma omp parallel for if (threads > 1) num_threads(threads) schedule(static)
    for (std::int64_t i = 0; i < len; ++i) {
        a[i] = 0.25;
        b[i] = 1.0;
        c[i] = 2.0;
    }
    return arr;
}

double bandwidth_from_stats(StreamKind kind, std::size_t n_elems, const TimingStats& stats) {
    if (n_elems == 0) throw ParameterError("stream array length must be positive");
    if (!(stats.best_s > 0.0)) throw MeasurementError("best time must be positive");
    const auto& info = stream_kind_info(kind);
    return static_cast<double>(info.bytes_per_iter) * static_cast<double>(n_elems) / stats.best_s;
}

namespace {

void run_kernel(StreamKind kind, StreamArrays& arr, int threads) {
    double* a = arr.a.data();
    const double* b = arr.b.data();
    const double* c = arr.c.data();
    const double d = arr.d;
    const std::int64_t len = static_cast<std::int64_t>(arr.a.size());
    switch (kind) {
        case StreamKind::Copy:
#pragma omp parallel for if (threads > 1) num_threads(threads) schedule(static)
            for (std::int64_t i = 0; i < len; ++i) a[i] = b[i];
            break;
        case StreamKind::Scale:
#pragma omp parallel for if (threads > 1) num_threads(threads) schedule(static)
            for (std::int64_t i = 0; i < len; ++i) a[i] = d * b[i];
            break;
        case StreamKind::Sum:
#pragma omp parallel for if (threads > 1) num_threads(threads) schedule(static)
            for (std::int64_t i = 0; i < len; ++i) a[i] = b[i] + c[i];
            break;
        case StreamKind::Triad:
#pragma omp parallel for if (threads > 1) num_threads(threads) schedule(static)
            for (std::int64_t i = 0; i < len; ++i) a[i] = b[i] + d * c[i];
            break;
    }
}

// All operands are small integers scaled by powers of two, so every kernel
// result is exact in double and the check can demand bit equality.
void verify_kernel(StreamKind kind, const StreamArrays& arr) {
    const std::size_t n = arr.a.size();
    for (std::size_t i = 0; i < n; ++i) {
        double expect = 0.0;
        switch (kind) {
            case StreamKind::Copy: expect = arr.b[i]; break;
            case StreamKind::Scale: expect = arr.d * arr.b[i]; break;
            case StreamKind::Sum: expect = arr.b[i] + arr.c[i]; break;
            case StreamKind::Triad: expect = arr.b[i] + arr.d * arr.c[i]; break;
        }
        if (arr.a[i] != expect) {
            throw KernelError(std::string("stream ") + stream_kind_info(kind).name +
                              " verification failed at index " + std::to_string(i));
        }
    }
}

}  // namespace

BandwidthMeasurement run_stream_test(StreamKind kind, std::size_t n_elems, int threads,
                                     const RepetitionPolicy& policy) {
    StreamArrays arr = StreamArrays::make(n_elems, threads);
    TimingStats stats = measure([&] { run_kernel(kind, arr, threads); }, policy);
    verify_kernel(kind, arr);
    BandwidthMeasurement m;
    m.kind = kind;
    m.mode = StreamMode::Threaded;
    m.n_elems = n_elems;
    m.threads = threads;
    m.scaled_by_cores = 1;
    m.stats = stats;
    m.best_bandwidth_Bps = bandwidth_from_stats(kind, n_elems, stats);
    return m;
}

std::size_t size_for_level(const MemoryLevel& level, const DeviceProfile& device, StreamKind kind) {
    // Locate the level inside the profile to find its next-faster neighbor.
    std::size_t index = device.levels.size();
    if (!device.levels.empty() && &level >= device.levels.data() &&
        &level < device.levels.data() + device.levels.size()) {
        index = static_cast<std::size_t>(&level - device.levels.data());
    } else {
        for (std::size_t i = 0; i < device.levels.size(); ++i) {
            if (device.levels[i].name == level.name) {
                index = i;
                break;
            }
        }
    }
    if (index >= device.levels.size()) {
        throw ParameterError("memory level '" + level.name + "' is not part of device '" +
                             device.name + "'");
    }

    const std::uint64_t elem_bytes = 8ull * static_cast<std::uint64_t>(arrays_touched(kind));
    const MemoryLevel* faster = device.next_faster(index);

    // Lower bound: working set at least 4x the next-faster capacity, so the
    // faster level cannot hold it. Upper bound: at most half this level.
    std::uint64_t n_min = 1;
    if (faster != nullptr) {
        n_min = (4ull * faster->capacity_bytes + elem_bytes - 1) / elem_bytes;
        if (n_min == 0) n_min = 1;
    }
    const std::uint64_t n_max = (level.capacity_bytes / 2) / elem_bytes;
    if (n_max == 0 || n_min > n_max) {
        std::string msg = "cannot size working set for level '" + level.name + "'";
        if (faster != nullptr) {
            msg += ": 4x '" + faster->name + "' (" + std::to_string(faster->capacity_bytes) +
                   " B) exceeds half of '" + level.name + "' (" +
                   std::to_string(level.capacity_bytes) + " B)";
        } else {
            msg += ": capacity " + std::to_string(level.capacity_bytes) + " B is too small";
        }
        throw SizingError(msg);
    }

    if (!device.is_last_level(index)) {
        // Cache levels: use the largest working set that still fits.
        return static_cast<std::size_t>(n_max);
    }
    // Backing memory: large enough to defeat the caches, but no point in
    // filling half of it. 8x the last cache (or 64 MiB without one).
    std::uint64_t target_bytes = faster != nullptr ? 8ull * faster->capacity_bytes : (64ull << 20);
    std::uint64_t n_target = target_bytes / elem_bytes;
    n_target = std::clamp(n_target, n_min, n_max);
    return static_cast<std::size_t>(n_target);
}

SweepResult run_hierarchy_sweep(const DeviceProfile& device, const RepetitionPolicy& policy) {
    device.validate();
    if (!policy.valid()) throw ParameterError("invalid repetition policy");
    SweepResult result;
    for (std::size_t li = 0; li < device.levels.size(); ++li) {
        const MemoryLevel& level = device.levels[li];
        for (const auto& info : kStreamKinds) {
            std::size_t n = 0;
            try {
                n = size_for_level(level, device, info.kind);
            } catch (const Error& e) {
                result.errors.push_back({level.name, info.kind, e.what()});
                continue;
            }
            const bool per_core = !level.shared;
            const int threads = per_core ? 1 : device.core_count;
            try {
                BandwidthMeasurement m = run_stream_test(info.kind, n, threads, policy);
                m.level = level.name;
                if (per_core) {
                    // Per-core capacity: one core's bandwidth, scaled by the
                    // number of cores that own a copy of this level.
                    m.mode = StreamMode::SequentialScaled;
                    m.scaled_by_cores = device.core_count;
                    m.best_bandwidth_Bps *= static_cast<double>(device.core_count);
                } else {
                    m.mode = StreamMode::Threaded;
                    m.scaled_by_cores = 1;
                }
                result.measurements.push_back(std::move(m));
            } catch (const Error& e) {
                result.errors.push_back({level.name, info.kind, e.what()});
            }
        }
    }
    return result;
}

std::vector<std::string> sweep_soft_warnings(const SweepResult& result) {
    std::vector<std::string> warnings;
    // Collect the distinct level labels in first-seen order.
    std::vector<std::string> levels;
    for (const auto& m : result.measurements) {
        if (std::find(levels.begin(), levels.end(), m.level) == levels.end()) {
            levels.push_back(m.level);
        }
    }
    for (const auto& level : levels) {
        const BandwidthMeasurement* copy = nullptr;
        const BandwidthMeasurement* scale = nullptr;
        for (const auto& m : result.measurements) {
            if (m.level != level) continue;
            if (m.kind == StreamKind::Copy) copy = &m;
            if (m.kind == StreamKind::Scale) scale = &m;
        }
        if (copy == nullptr || scale == nullptr) continue;
        const double lo = std::min(copy->best_bandwidth_Bps, scale->best_bandwidth_Bps);
        const double hi = std::max(copy->best_bandwidth_Bps, scale->best_bandwidth_Bps);
        if (lo > 0.0 && hi / lo > 1.25) {
            warnings.push_back("copy and scale bandwidths differ by more than 25% at level '" +
                               level + "' (copy=" + format_bps(copy->best_bandwidth_Bps) +
                               " B/s, scale=" + format_bps(scale->best_bandwidth_Bps) + " B/s)");
        }
    }
    return warnings;
}

}  // namespace membench
