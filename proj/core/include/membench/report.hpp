#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "membench/timing.hpp"

namespace membench {

inline constexpr int kSchemaVersion = 1;

/// The pinned CSV column set, in order. JSON carries these plus the
/// fields that do not fit a flat CSV row (samples, worst time, stream
/// metadata, timestamp).
inline constexpr const char* kCsvHeader =
    "suite,variant,device,n,w,h,c,f,blk,threads,best_s,median_s,bytes_moved,baseline_Bps,"
    "utilization,speedup,schema_version";

/// One benchmark result row. Optionals absent where a parameter does not
/// apply (e.g. image fields on a transpose run). String fields must stay
/// free of commas, quotes, and newlines so CSV rows never need quoting.
struct RunRecord {
    std::string suite;    // stream | transpose | blur
    std::string variant;  // ladder variant or stream test token
    std::string device;

    std::optional<std::uint64_t> n;    // matrix size / stream elements
    std::optional<std::uint64_t> w, h, c;
    std::optional<int> f;
    std::optional<std::uint64_t> blk;
    int threads = 1;

    TimingStats stats;

    std::optional<std::uint64_t> bytes_moved;
    std::optional<double> baseline_Bps;
    std::optional<double> utilization;
    bool overflow = false;               // meaningful when utilization is set
    std::optional<double> speedup;
    std::optional<double> t_naive_s;     // the naive time behind the speedup

    // Stream runs only.
    std::optional<double> bandwidth_Bps;
    std::optional<std::string> kind;
    std::optional<std::string> level;
    std::optional<std::string> mode;
    std::optional<int> scaled_by_cores;

    std::string timestamp;  // ISO 8601 UTC; lives in JSON, not CSV
    int schema_version = kSchemaVersion;

    void validate() const;
    bool operator==(const RunRecord& other) const;
};

/// Current time as an ISO 8601 UTC string (e.g. 2026-08-16T12:00:00Z).
std::string iso8601_utc_now();

/// CSV with the pinned header; floats serialized with shortest round-trip
/// precision. Throws ParameterError on an empty record list.
std::string emit_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> parse_csv(const std::string& text);

/// JSON array of flat objects carrying every record field.
std::string emit_json(const std::vector<RunRecord>& records);
std::vector<RunRecord> parse_json(const std::string& text);

/// Grouped bar charts (for example by device or by size) with a naive-time
/// annotation per group and a speedup annotation on each non-naive bar.
enum class ChartKind { Time, Bandwidth, Utilization };

struct ChartBar {
    std::string label;
    double value = 0.0;
    std::optional<double> speedup;  // annotated above the bar when present
    bool overflow = false;          // utilization charts: bar exceeds 1
};

struct ChartGroup {
    std::string label;
    std::optional<double> naive_time_s;  // annotated under the group label
    std::vector<ChartBar> bars;
};

struct ChartSpec {
    std::string title;
    ChartKind kind = ChartKind::Time;
    std::string y_label;  // e.g. "time, s" or "bandwidth, GB/s"
    std::vector<ChartGroup> groups;
};

/// Self-contained SVG 1.1 document. Deterministic: identical specs render
/// byte-identical bytes. Utilization charts cap the axis at 1 and mark
/// overflowing bars. Throws FormatError naming the bar on non-finite
/// values, ParameterError on empty groups.
std::string render_chart(const ChartSpec& spec);

}  // namespace membench
