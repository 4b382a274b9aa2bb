#include "membench/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include <json.hpp>

#include "membench/error.hpp"

namespace membench {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fmt_fixed(double v, int prec) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, prec);
    return std::string(buf, res.ptr);
}

std::string fmt_sig3(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 3);
    return std::string(buf, res.ptr);
}

void check_csv_safe(const std::string& value, const char* field) {
    if (value.find_first_of(",\"\n\r") != std::string::npos) {
        throw ParameterError(std::string(field) + " may not contain commas, quotes, or newlines: " +
                             value);
    }
}

void check_finite(double v, const char* field) {
    if (!std::isfinite(v)) throw ParameterError(std::string(field) + " is not finite");
}

}  // namespace

void RunRecord::validate() const {
    if (suite != "stream" && suite != "transpose" && suite != "blur") {
        throw ParameterError("unknown suite: " + suite);
    }
    if (variant.empty()) throw ParameterError("record variant is empty");
    if (device.empty()) throw ParameterError("record device is empty");
    check_csv_safe(variant, "variant");
    check_csv_safe(device, "device");
    if (kind) check_csv_safe(*kind, "kind");
    if (level) check_csv_safe(*level, "level");
    if (mode) check_csv_safe(*mode, "mode");
    check_csv_safe(timestamp, "timestamp");
    if (threads < 1) throw ParameterError("record thread count must be at least 1");
    if (schema_version < 1) throw ParameterError("schema version must be at least 1");
    if (stats.samples_s.empty()) throw ParameterError("record has no timing samples");
    check_finite(stats.best_s, "best_s");
    check_finite(stats.median_s, "median_s");
    check_finite(stats.worst_s, "worst_s");
    if (!(stats.best_s > 0.0)) throw ParameterError("best time must be positive");
    if (stats.best_s > stats.median_s || stats.median_s > stats.worst_s) {
        throw ParameterError("timing stats must satisfy best <= median <= worst");
    }
    for (double s : stats.samples_s) check_finite(s, "sample");
    if (baseline_Bps) check_finite(*baseline_Bps, "baseline_Bps");
    if (utilization) check_finite(*utilization, "utilization");
    if (speedup) check_finite(*speedup, "speedup");
    if (t_naive_s) check_finite(*t_naive_s, "t_naive_s");
    if (bandwidth_Bps) check_finite(*bandwidth_Bps, "bandwidth_Bps");
}

bool RunRecord::operator==(const RunRecord& other) const {
    return suite == other.suite && variant == other.variant && device == other.device &&
           n == other.n && w == other.w && h == other.h && c == other.c && f == other.f &&
           blk == other.blk && threads == other.threads &&
           stats.samples_s == other.stats.samples_s && stats.best_s == other.stats.best_s &&
           stats.median_s == other.stats.median_s && stats.worst_s == other.stats.worst_s &&
           bytes_moved == other.bytes_moved && baseline_Bps == other.baseline_Bps &&
           utilization == other.utilization && overflow == other.overflow &&
           speedup == other.speedup && t_naive_s == other.t_naive_s &&
           bandwidth_Bps == other.bandwidth_Bps && kind == other.kind && level == other.level &&
           mode == other.mode && scaled_by_cores == other.scaled_by_cores &&
           timestamp == other.timestamp && schema_version == other.schema_version;
}

std::string iso8601_utc_now() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm_utc.tm_year + 1900,
                  tm_utc.tm_mon + 1, tm_utc.tm_mday, tm_utc.tm_hour, tm_utc.tm_min,
                  tm_utc.tm_sec);
    return std::string(buf);
}

namespace {

std::string opt_u64_cell(const std::optional<std::uint64_t>& v) {
    return v ? std::to_string(*v) : std::string();
}

std::string opt_double_cell(const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string();
}

}  // namespace

std::string emit_csv(const std::vector<RunRecord>& records) {
    if (records.empty()) throw ParameterError("no records to serialize");
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : records) {
        r.validate();
        out += r.suite;
        out += ',';
        out += r.variant;
        out += ',';
        out += r.device;
        out += ',';
        out += opt_u64_cell(r.n);
        out += ',';
        out += opt_u64_cell(r.w);
        out += ',';
        out += opt_u64_cell(r.h);
        out += ',';
        out += opt_u64_cell(r.c);
        out += ',';
        out += r.f ? std::to_string(*r.f) : std::string();
        out += ',';
        out += opt_u64_cell(r.blk);
        out += ',';
        out += std::to_string(r.threads);
        out += ',';
        out += fmt_double(r.stats.best_s);
        out += ',';
        out += fmt_double(r.stats.median_s);
        out += ',';
        out += opt_u64_cell(r.bytes_moved);
        out += ',';
        out += opt_double_cell(r.baseline_Bps);
        out += ',';
        out += opt_double_cell(r.utilization);
        out += ',';
        out += opt_double_cell(r.speedup);
        out += ',';
        out += std::to_string(r.schema_version);
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

[[noreturn]] void csv_fail(std::size_t line_no, const std::string& what) {
    throw FormatError("CSV line " + std::to_string(line_no) + ": " + what);
}

std::uint64_t csv_u64(const std::string& field, std::size_t line_no, const char* col) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        csv_fail(line_no, std::string("bad integer in column ") + col + ": '" + field + "'");
    }
    return v;
}

int csv_int(const std::string& field, std::size_t line_no, const char* col) {
    int v = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        csv_fail(line_no, std::string("bad integer in column ") + col + ": '" + field + "'");
    }
    return v;
}

double csv_double(const std::string& field, std::size_t line_no, const char* col) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        csv_fail(line_no, std::string("bad number in column ") + col + ": '" + field + "'");
    }
    return v;
}

}  // namespace

std::vector<RunRecord> parse_csv(const std::string& text) {
    std::vector<std::string> lines = split(text, '\n');
    for (auto& line : lines) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw FormatError("empty CSV input");
    if (lines[0] != kCsvHeader) {
        throw FormatError("unexpected CSV header: '" + lines[0] + "'");
    }
    std::vector<RunRecord> records;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const std::vector<std::string> cells = split(lines[li], ',');
        if (cells.size() != 17) {
            csv_fail(li + 1, "expected 17 columns, got " + std::to_string(cells.size()));
        }
        RunRecord r;
        r.suite = cells[0];
        r.variant = cells[1];
        r.device = cells[2];
        if (!cells[3].empty()) r.n = csv_u64(cells[3], li + 1, "n");
        if (!cells[4].empty()) r.w = csv_u64(cells[4], li + 1, "w");
        if (!cells[5].empty()) r.h = csv_u64(cells[5], li + 1, "h");
        if (!cells[6].empty()) r.c = csv_u64(cells[6], li + 1, "c");
        if (!cells[7].empty()) r.f = csv_int(cells[7], li + 1, "f");
        if (!cells[8].empty()) r.blk = csv_u64(cells[8], li + 1, "blk");
        r.threads = csv_int(cells[9], li + 1, "threads");
        r.stats.best_s = csv_double(cells[10], li + 1, "best_s");
        r.stats.median_s = csv_double(cells[11], li + 1, "median_s");
        // CSV does not carry the sample list; reconstruct the minimal stats
        // that satisfy the record invariants.
        r.stats.worst_s = r.stats.median_s;
        r.stats.samples_s = {r.stats.best_s, r.stats.median_s};
        if (!cells[12].empty()) r.bytes_moved = csv_u64(cells[12], li + 1, "bytes_moved");
        if (!cells[13].empty()) r.baseline_Bps = csv_double(cells[13], li + 1, "baseline_Bps");
        if (!cells[14].empty()) {
            r.utilization = csv_double(cells[14], li + 1, "utilization");
            r.overflow = *r.utilization > 1.0;
        }
        if (!cells[15].empty()) r.speedup = csv_double(cells[15], li + 1, "speedup");
        r.schema_version = csv_int(cells[16], li + 1, "schema_version");
        r.validate();
        records.push_back(std::move(r));
    }
    if (records.empty()) throw FormatError("CSV input has no data rows");
    return records;
}

std::string emit_json(const std::vector<RunRecord>& records) {
    if (records.empty()) throw ParameterError("no records to serialize");
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        r.validate();
        nlohmann::ordered_json o;
        o["suite"] = r.suite;
        o["variant"] = r.variant;
        o["device"] = r.device;
        if (r.n) o["n"] = *r.n;
        if (r.w) o["w"] = *r.w;
        if (r.h) o["h"] = *r.h;
        if (r.c) o["c"] = *r.c;
        if (r.f) o["f"] = *r.f;
        if (r.blk) o["blk"] = *r.blk;
        o["threads"] = r.threads;
        o["best_s"] = r.stats.best_s;
        o["median_s"] = r.stats.median_s;
        o["worst_s"] = r.stats.worst_s;
        o["samples_s"] = r.stats.samples_s;
        if (r.bytes_moved) o["bytes_moved"] = *r.bytes_moved;
        if (r.baseline_Bps) o["baseline_Bps"] = *r.baseline_Bps;
        if (r.utilization) {
            o["utilization"] = *r.utilization;
            o["overflow"] = r.overflow;
        }
        if (r.speedup) o["speedup"] = *r.speedup;
        if (r.t_naive_s) o["t_naive_s"] = *r.t_naive_s;
        if (r.bandwidth_Bps) o["bandwidth_Bps"] = *r.bandwidth_Bps;
        if (r.kind) o["kind"] = *r.kind;
        if (r.level) o["level"] = *r.level;
        if (r.mode) o["mode"] = *r.mode;
        if (r.scaled_by_cores) o["scaled_by_cores"] = *r.scaled_by_cores;
        if (!r.timestamp.empty()) o["timestamp"] = r.timestamp;
        o["schema_version"] = r.schema_version;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

std::vector<RunRecord> parse_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad JSON: ") + e.what());
    }
    if (!doc.is_array()) throw FormatError("expected a JSON array of records");
    std::vector<RunRecord> records;
    try {
        for (const auto& o : doc) {
            RunRecord r;
            r.suite = o.at("suite").get<std::string>();
            r.variant = o.at("variant").get<std::string>();
            r.device = o.at("device").get<std::string>();
            if (o.contains("n")) r.n = o["n"].get<std::uint64_t>();
            if (o.contains("w")) r.w = o["w"].get<std::uint64_t>();
            if (o.contains("h")) r.h = o["h"].get<std::uint64_t>();
            if (o.contains("c")) r.c = o["c"].get<std::uint64_t>();
            if (o.contains("f")) r.f = o["f"].get<int>();
            if (o.contains("blk")) r.blk = o["blk"].get<std::uint64_t>();
            r.threads = o.at("threads").get<int>();
            r.stats.best_s = o.at("best_s").get<double>();
            r.stats.median_s = o.at("median_s").get<double>();
            r.stats.worst_s = o.at("worst_s").get<double>();
            r.stats.samples_s = o.at("samples_s").get<std::vector<double>>();
            if (o.contains("bytes_moved")) r.bytes_moved = o["bytes_moved"].get<std::uint64_t>();
            if (o.contains("baseline_Bps")) r.baseline_Bps = o["baseline_Bps"].get<double>();
            if (o.contains("utilization")) r.utilization = o["utilization"].get<double>();
            if (o.contains("overflow")) r.overflow = o["overflow"].get<bool>();
            if (o.contains("speedup")) r.speedup = o["speedup"].get<double>();
            if (o.contains("t_naive_s")) r.t_naive_s = o["t_naive_s"].get<double>();
            if (o.contains("bandwidth_Bps")) r.bandwidth_Bps = o["bandwidth_Bps"].get<double>();
            if (o.contains("kind")) r.kind = o["kind"].get<std::string>();
            if (o.contains("level")) r.level = o["level"].get<std::string>();
            if (o.contains("mode")) r.mode = o["mode"].get<std::string>();
            if (o.contains("scaled_by_cores")) r.scaled_by_cores = o["scaled_by_cores"].get<int>();
            if (o.contains("timestamp")) r.timestamp = o["timestamp"].get<std::string>();
            r.schema_version = o.at("schema_version").get<int>();
            r.validate();
            records.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("bad record JSON: ") + e.what());
    }
    if (records.empty()) throw FormatError("JSON input has no records");
    return records;
}

// ---------------------------------------------------------------------------
// SVG charts

namespace {

constexpr double kMarginL = 74.0;
constexpr double kMarginR = 24.0;
constexpr double kMarginT = 66.0;
constexpr double kMarginB = 88.0;
constexpr double kPlotH = 280.0;
constexpr double kBarW = 54.0;
constexpr double kBarGap = 8.0;
constexpr double kGroupGap = 40.0;

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                    "#59a14f", "#edc949", "#b07aa1"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::string px(double v) { return fmt_fixed(v, 1); }

void append_text(std::string& svg, double x, double y, const std::string& anchor, int size,
                 const std::string& text, const char* extra = "") {
    svg += "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" text-anchor=\"" + anchor +
           "\" font-size=\"" + std::to_string(size) + "\"" + extra + ">" + xml_escape(text) +
           "</text>\n";
}

double nice_ceiling(double raw) {
    if (raw <= 0.0) return 1.0;
    const double k = std::floor(std::log10(raw));
    const double base = std::pow(10.0, k);
    for (double mult : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        const double candidate = mult * base;
        if (candidate >= raw * (1.0 - 1e-12)) return candidate;
    }
    return 10.0 * base;
}

std::string bar_value_label(ChartKind kind, double value) {
    switch (kind) {
        case ChartKind::Time: return fmt_sig3(value) + " s";
        case ChartKind::Bandwidth: return fmt_sig3(value);
        case ChartKind::Utilization: return fmt_fixed(value, 2);
    }
    return fmt_sig3(value);
}

}  // namespace

std::string render_chart(const ChartSpec& spec) {
    if (spec.groups.empty()) throw ParameterError("chart has no groups");
    for (const auto& g : spec.groups) {
        if (g.bars.empty()) throw ParameterError("chart group '" + g.label + "' has no bars");
        if (g.naive_time_s && !std::isfinite(*g.naive_time_s)) {
            throw FormatError("non-finite naive time in chart group '" + g.label + "'");
        }
        for (const auto& b : g.bars) {
            if (!std::isfinite(b.value) || b.value < 0.0) {
                throw FormatError("non-finite or negative value in chart bar '" + g.label + "/" +
                                  b.label + "'");
            }
            if (b.speedup && !std::isfinite(*b.speedup)) {
                throw FormatError("non-finite speedup in chart bar '" + g.label + "/" + b.label +
                                  "'");
            }
        }
    }

    // Legend entries: bar labels in order of first appearance; the entry
    // index also fixes each bar's color, so colors agree across groups.
    std::vector<std::string> legend;
    for (const auto& g : spec.groups) {
        for (const auto& b : g.bars) {
            if (std::find(legend.begin(), legend.end(), b.label) == legend.end()) {
                legend.push_back(b.label);
            }
        }
    }
    auto color_of = [&legend](const std::string& label) {
        const std::size_t i = static_cast<std::size_t>(
            std::find(legend.begin(), legend.end(), label) - legend.begin());
        return kPalette[i % kPaletteSize];
    };

    double groups_w = 0.0;
    for (const auto& g : spec.groups) {
        groups_w += static_cast<double>(g.bars.size()) * kBarW +
                    static_cast<double>(g.bars.size() - 1) * kBarGap;
    }
    groups_w += static_cast<double>(spec.groups.size() - 1) * kGroupGap;
    const double width = std::max(380.0, kMarginL + groups_w + kMarginR);
    const double height = kMarginT + kPlotH + kMarginB;
    const double plot_bottom = kMarginT + kPlotH;

    double ymax = 1.0;
    if (spec.kind == ChartKind::Utilization) {
        ymax = 1.0;  // axis capped at 1; overflowing bars are marked
    } else {
        double raw = 0.0;
        for (const auto& g : spec.groups) {
            for (const auto& b : g.bars) raw = std::max(raw, b.value);
        }
        ymax = nice_ceiling(raw);
    }
    auto y_of = [&](double value) { return plot_bottom - (value / ymax) * kPlotH; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) + "\" height=\"" +
           px(height) + "\" viewBox=\"0 0 " + px(width) + " " + px(height) + "\">\n";
    svg += "<g font-family=\"Helvetica, Arial, sans-serif\" fill=\"#222222\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + px(width) + "\" height=\"" + px(height) +
           "\" fill=\"#ffffff\"/>\n";

    append_text(svg, width / 2.0, 24.0, "middle", 16, spec.title, " font-weight=\"bold\"");

    // Legend row under the title.
    {
        double lx = kMarginL;
        const double ly = 42.0;
        for (const auto& entry : legend) {
            svg += "<rect x=\"" + px(lx) + "\" y=\"" + px(ly - 10.0) +
                   "\" width=\"12\" height=\"12\" fill=\"" + std::string(color_of(entry)) +
                   "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
            append_text(svg, lx + 17.0, ly, "start", 11, entry);
            lx += 17.0 + static_cast<double>(entry.size()) * 6.6 + 16.0;
        }
    }

    // Axis, ticks, gridlines.
    for (int t = 0; t <= 4; ++t) {
        const double frac = static_cast<double>(t) / 4.0;
        const double y = plot_bottom - frac * kPlotH;
        svg += "<line x1=\"" + px(kMarginL - 6.0) + "\" y1=\"" + px(y) + "\" x2=\"" +
               px(width - kMarginR) + "\" y2=\"" + px(y) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        const double tick_value = ymax * frac;
        const std::string label = spec.kind == ChartKind::Utilization ? fmt_fixed(tick_value, 2)
                                                                      : fmt_sig3(tick_value);
        append_text(svg, kMarginL - 10.0, y + 4.0, "end", 11, label);
    }
    svg += "<line x1=\"" + px(kMarginL - 6.0) + "\" y1=\"" + px(kMarginT) + "\" x2=\"" +
           px(kMarginL - 6.0) + "\" y2=\"" + px(plot_bottom) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + px(kMarginL - 6.0) + "\" y1=\"" + px(plot_bottom) + "\" x2=\"" +
           px(width - kMarginR) + "\" y2=\"" + px(plot_bottom) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    if (!spec.y_label.empty()) {
        svg += "<text x=\"18\" y=\"" + px(kMarginT + kPlotH / 2.0) +
               "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 18 " +
               px(kMarginT + kPlotH / 2.0) + ")\">" + xml_escape(spec.y_label) + "</text>\n";
    }

    double cursor = kMarginL;
    for (const auto& g : spec.groups) {
        const double group_w = static_cast<double>(g.bars.size()) * kBarW +
                               static_cast<double>(g.bars.size() - 1) * kBarGap;
        for (std::size_t bi = 0; bi < g.bars.size(); ++bi) {
            const auto& b = g.bars[bi];
            const double x = cursor + static_cast<double>(bi) * (kBarW + kBarGap);
            const double capped =
                spec.kind == ChartKind::Utilization ? std::min(b.value, ymax) : b.value;
            const double y_top = y_of(capped);
            svg += "<rect x=\"" + px(x) + "\" y=\"" + px(y_top) + "\" width=\"" + px(kBarW) +
                   "\" height=\"" + px(plot_bottom - y_top) + "\" fill=\"" +
                   std::string(color_of(b.label)) + "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
            double label_y = y_top - 8.0;
            const bool marked = spec.kind == ChartKind::Utilization && b.overflow;
            if (marked) {
                // Off-scale marker: the bar is drawn capped at 1, the true
                // value still appears in its label.
                const double cx = x + kBarW / 2.0;
                svg += "<path d=\"M " + px(cx - 7.0) + " " + px(y_top - 3.0) + " L " +
                       px(cx + 7.0) + " " + px(y_top - 3.0) + " L " + px(cx) + " " +
                       px(y_top - 13.0) + " Z\" fill=\"#d62728\" stroke=\"#333333\" "
                       "stroke-width=\"0.5\"/>\n";
                label_y = y_top - 18.0;
            }
            append_text(svg, x + kBarW / 2.0, label_y, "middle", 11,
                        bar_value_label(spec.kind, b.value));
            if (b.speedup) {
                append_text(svg, x + kBarW / 2.0, label_y - 13.0, "middle", 11,
                            fmt_fixed(*b.speedup, 2) + "x", " font-weight=\"bold\"");
            }
        }
        append_text(svg, cursor + group_w / 2.0, plot_bottom + 20.0, "middle", 12, g.label,
                    " font-weight=\"bold\"");
        if (g.naive_time_s) {
            append_text(svg, cursor + group_w / 2.0, plot_bottom + 38.0, "middle", 11,
                        "naive: " + fmt_sig3(*g.naive_time_s) + " s");
        }
        cursor += group_w + kGroupGap;
    }

    svg += "</g>\n</svg>\n";
    return svg;
}

}  // namespace membench
