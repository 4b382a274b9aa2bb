// membench: command-line driver for the memory-bound kernel benchmark
// suite. Subcommands run the bandwidth hierarchy sweep, the in-place
// transposition ladder, the Gaussian blur ladder, the whole lot (suite),
// or re-render charts from a saved record file.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "membench/blur.hpp"
#include "membench/device_profile.hpp"
#include "membench/error.hpp"
#include "membench/image_io.hpp"
#include "membench/metrics.hpp"
#include "membench/report.hpp"
#include "membench/stream.hpp"
#include "membench/timing.hpp"
#include "membench/transpose.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace membench;

namespace {

struct Options {
    std::string profile_path;
    std::string out_dir = "membench-out";
    std::string format = "both";  // csv | json | both
    int reps = 10;
    int warmup = 2;
    double budget_s = 0.0;  // 0 = no budget
    int threads = 0;        // 0 = profile core count
    std::uint64_t seed = 42;
    std::string baseline_path;

    // transpose
    std::vector<std::uint64_t> sizes{8192, 16384};
    std::uint64_t block = 0;  // 0 = derived from the profile cache size
    std::vector<std::string> transpose_variants;

    // blur
    std::string image_path;
    std::string synthetic = "random";
    std::uint64_t img_w = 2544, img_h = 2027, img_c = 3;
    int filter_size = 19;
    double sigma = 0.0;  // 0 = default for the filter size
    std::vector<std::string> blur_variants;

    // suite
    std::vector<std::string> skips;

    // chart
    std::string records_path;
};

struct Context {
    DeviceProfile profile;
    RepetitionPolicy policy;
    int threads = 1;
    std::uint64_t seed = 42;
    fs::path out;
    std::string format = "both";

    std::vector<RunRecord> records;
    std::vector<std::string> notes;  // skips and warnings, mirrored to stderr
    std::optional<BaselineSet> baselines;
    bool warned_no_baseline = false;
};

void note(Context& ctx, const std::string& msg) {
    ctx.notes.push_back(msg);
    std::cerr << "membench: " << msg << "\n";
}

std::optional<std::uint64_t> mem_available_bytes() {
    std::ifstream in("/proc/meminfo");
    if (!in) return std::nullopt;
    std::string key;
    std::uint64_t value = 0;
    std::string unit;
    while (in >> key >> value >> unit) {
        if (key == "MemAvailable:") return value * 1024ull;
    }
    return std::nullopt;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw ResourceError("write failed for '" + path.string() + "'");
}

/// Accepts either a records.json produced by the stream subcommand or a
/// plain {"threaded_Bps": X, "single_core_Bps": Y} object.
BaselineSet baselines_from_file(const std::string& path, const std::string& dram_level) {
    const std::string text = read_text_file(path);
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::exception& e) {
        throw FormatError("baseline file '" + path + "' is not valid JSON: " + e.what());
    }
    if (j.is_object()) {
        if (!j.contains("threaded_Bps") || !j.contains("single_core_Bps")) {
            throw FormatError("baseline object in '" + path +
                              "' needs threaded_Bps and single_core_Bps");
        }
        BaselineSet set;
        set.threaded_Bps = j["threaded_Bps"].get<double>();
        set.single_core_Bps = j["single_core_Bps"].get<double>();
        if (!set.valid()) {
            throw FormatError("baseline values in '" + path + "' must be positive");
        }
        return set;
    }
    const std::vector<RunRecord> records = parse_json(text);
    std::vector<BandwidthMeasurement> ms;
    for (const RunRecord& r : records) {
        if (r.suite != "stream" || !r.bandwidth_Bps || !r.level || !r.kind) continue;
        BandwidthMeasurement m;
        m.kind = stream_kind_from_name(*r.kind);
        m.level = *r.level;
        m.mode = (r.mode && *r.mode == std::string(stream_mode_name(StreamMode::SequentialScaled)))
                     ? StreamMode::SequentialScaled
                     : StreamMode::Threaded;
        m.n_elems = r.n.value_or(0);
        m.best_bandwidth_Bps = *r.bandwidth_Bps;
        m.scaled_by_cores = r.scaled_by_cores.value_or(1);
        m.threads = r.threads;
        m.stats = r.stats;
        ms.push_back(m);
    }
    return baselines_from_measurements(ms, dram_level);
}

// ---------------------------------------------------------------------------
// stream

RunRecord stream_record(const Context& ctx, const BandwidthMeasurement& m) {
    RunRecord r;
    r.suite = "stream";
    const std::string suffix = m.mode == StreamMode::SequentialScaled
                                   ? "seqx" + std::to_string(m.scaled_by_cores)
                                   : "t" + std::to_string(m.threads);
    r.variant = std::string(stream_kind_info(m.kind).name) + "_" + m.level + "_" + suffix;
    r.device = ctx.profile.name;
    r.n = m.n_elems;
    r.threads = m.threads;
    r.stats = m.stats;
    r.bytes_moved = stream_traffic(m.kind, m.n_elems).bytes_moved;
    r.bandwidth_Bps = m.best_bandwidth_Bps;
    r.kind = stream_kind_info(m.kind).name;
    r.level = m.level;
    r.mode = stream_mode_name(m.mode);
    r.scaled_by_cores = m.scaled_by_cores;
    r.timestamp = iso8601_utc_now();
    return r;
}

int cmd_stream(Context& ctx) {
    const SweepResult sweep = run_hierarchy_sweep(ctx.profile, ctx.policy);
    for (const std::string& w : sweep_soft_warnings(sweep)) {
        note(ctx, "warning: " + w);
    }
    for (const SweepError& e : sweep.errors) {
        std::string what = "skip: stream level '" + e.level + "'";
        if (e.kind) what += std::string(" ") + stream_kind_info(*e.kind).name;
        note(ctx, what + ": " + e.message);
    }

    std::vector<BandwidthMeasurement> all = sweep.measurements;

    // The sweep times the slowest level with every core; sequential kernels
    // need the single-core figure as their utilization denominator too.
    if (ctx.profile.core_count > 1 && !ctx.profile.levels.empty()) {
        const MemoryLevel& dram = ctx.profile.last_level();
        const bool dram_swept =
            std::any_of(sweep.measurements.begin(), sweep.measurements.end(),
                        [&](const BandwidthMeasurement& m) { return m.level == dram.name; });
        if (dram_swept) {
            for (const StreamKindInfo& info : kStreamKinds) {
                try {
                    const std::size_t n = size_for_level(dram, ctx.profile, info.kind);
                    BandwidthMeasurement m = run_stream_test(info.kind, n, 1, ctx.policy);
                    m.level = dram.name;
                    all.push_back(m);
                } catch (const Error& e) {
                    note(ctx, std::string("skip: single-core baseline ") + info.name + ": " +
                                  e.what());
                }
            }
        }
    }

    if (all.empty()) {
        std::cerr << "membench: stream sweep produced no measurements; every level failed\n";
        return 1;
    }
    for (const BandwidthMeasurement& m : all) {
        ctx.records.push_back(stream_record(ctx, m));
    }
    if (!ctx.baselines) {
        try {
            ctx.baselines = baselines_from_measurements(all, ctx.profile.last_level().name);
        } catch (const Error&) {
            // No backing-memory rows; utilization consumers will warn.
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// transpose

std::vector<TransposeVariant> select_transpose_variants(const std::vector<std::string>& names) {
    if (names.empty()) return all_transpose_variants();
    std::vector<TransposeVariant> wanted;
    for (const std::string& name : names) wanted.push_back(transpose_variant_from_name(name));
    // Ladder order, so naive (the speedup reference) always runs first.
    std::vector<TransposeVariant> ordered;
    for (TransposeVariant v : all_transpose_variants()) {
        if (std::find(wanted.begin(), wanted.end(), v) != wanted.end()) ordered.push_back(v);
    }
    return ordered;
}

bool transpose_uses_threads(TransposeVariant v) {
    return v == TransposeVariant::Parallel || v == TransposeVariant::Dynamic;
}

bool transpose_uses_block(TransposeVariant v) {
    return v == TransposeVariant::Blocking || v == TransposeVariant::ManualBlocking ||
           v == TransposeVariant::Dynamic;
}

void attach_utilization(Context& ctx, RunRecord& r, const TrafficModel& traffic) {
    if (!ctx.baselines) {
        if (!ctx.warned_no_baseline) {
            note(ctx,
                 "warning: no stream baseline available; utilization omitted "
                 "(run the stream suite first or pass --baseline)");
            ctx.warned_no_baseline = true;
        }
        return;
    }
    const double base = ctx.baselines->pick(r.threads);
    const UtilizationRecord u = utilization(traffic, r.stats.best_s, base);
    r.bytes_moved = traffic.bytes_moved;
    r.baseline_Bps = base;
    r.utilization = u.utilization;
    r.overflow = u.overflow;
}

int cmd_transpose(Context& ctx, const std::vector<std::uint64_t>& sizes, std::uint64_t block,
                  const std::vector<std::string>& variant_names) {
    const std::vector<TransposeVariant> variants = select_transpose_variants(variant_names);
    int status = 0;

    for (std::uint64_t n : sizes) {
        // Working copy plus pristine reference, with slack for the rest of
        // the process.
        if (const auto avail = mem_available_bytes()) {
            const double need = 2.2 * static_cast<double>(n) * static_cast<double>(n) * 8.0;
            if (need > static_cast<double>(*avail)) {
                note(ctx, "skip: transpose n=" + std::to_string(n) +
                              " does not fit in memory (needs ~" +
                              std::to_string(static_cast<std::uint64_t>(need) >> 20) +
                              " MiB, " + std::to_string(*avail >> 20) + " MiB available)");
                continue;
            }
        }

        SquareMatrix pristine;
        try {
            pristine = SquareMatrix::random(n, ctx.seed);
        } catch (const Error& e) {
            note(ctx, "skip: transpose n=" + std::to_string(n) + ": " + e.what());
            continue;
        }

        std::optional<double> naive_best;
        for (TransposeVariant v : variants) {
            const char* vname = transpose_variant_name(v);
            const int threads = transpose_uses_threads(v) ? ctx.threads : 1;
            const std::uint64_t blk_used = std::min<std::uint64_t>(block, n);

            SquareMatrix work = pristine;
            try {
                run_transpose(v, work, blk_used, threads);
            } catch (const Error& e) {
                std::cerr << "membench: transpose variant '" << vname << "' n=" << n
                          << " failed: " << e.what() << "\n";
                status = 1;
                continue;
            }

            // Verified against the untouched copy before any timing.
            bool correct = true;
            for (std::size_t i = 0; i < n && correct; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (work.at(i, j) != pristine.at(j, i)) {
                        std::cerr << "membench: correctness failure: transpose variant '"
                                  << vname << "' n=" << n << " wrong at (" << i << "," << j
                                  << ")\n";
                        correct = false;
                        break;
                    }
                }
            }
            if (!correct) {
                status = 1;
                continue;
            }

            const TimingStats stats = measure(
                [&] {
                    run_transpose(v, work, blk_used, threads);
                    do_not_optimize(work.data.data());
                },
                ctx.policy);

            RunRecord r;
            r.suite = "transpose";
            r.variant = vname;
            r.device = ctx.profile.name;
            r.n = n;
            if (transpose_uses_block(v)) r.blk = blk_used;
            r.threads = threads;
            r.stats = stats;
            r.timestamp = iso8601_utc_now();

            attach_utilization(ctx, r, transpose_traffic(n));

            if (v == TransposeVariant::Naive) {
                naive_best = stats.best_s;
                r.speedup = 1.0;
                r.t_naive_s = stats.best_s;
            } else if (naive_best) {
                const SpeedupRecord s = speedup(*naive_best, stats.best_s, vname);
                r.speedup = s.speedup;
                r.t_naive_s = *naive_best;
            }
            ctx.records.push_back(std::move(r));
        }
    }
    return status;
}

// ---------------------------------------------------------------------------
// blur

std::vector<BlurVariant> select_blur_variants(const std::vector<std::string>& names) {
    if (names.empty()) return all_blur_variants();
    std::vector<BlurVariant> wanted;
    for (const std::string& name : names) wanted.push_back(blur_variant_from_name(name));
    std::vector<BlurVariant> ordered;
    for (BlurVariant v : all_blur_variants()) {
        if (std::find(wanted.begin(), wanted.end(), v) != wanted.end()) ordered.push_back(v);
    }
    return ordered;
}

bool blur_has_utilization_model(BlurVariant v) {
    // The streaming traffic model describes the separable two-pass family;
    // the 2D variants move kernel-dependent traffic it does not model.
    return v == BlurVariant::Separable || v == BlurVariant::SeparableMem ||
           v == BlurVariant::Parallel;
}

int cmd_blur(Context& ctx, const Options& o) {
    const std::vector<BlurVariant> variants = select_blur_variants(o.blur_variants);

    Image src;
    if (!o.image_path.empty()) {
        src = load_ppm(o.image_path);
    } else {
        src = synth_image(synth_pattern_from_name(o.synthetic), o.img_w, o.img_h, o.img_c,
                          ctx.seed);
    }

    const double sigma = o.sigma > 0.0 ? o.sigma : default_sigma(o.filter_size);
    const Gaussian1DKernel k1 = make_gaussian_kernel(o.filter_size, sigma);
    const std::size_t margin = static_cast<std::size_t>(k1.middle);

    // Cross-check every selected variant against every other before any
    // timing; disagreement is a correctness failure, not a statistic.
    {
        std::vector<Image> outs;
        outs.reserve(variants.size());
        for (BlurVariant v : variants) {
            const int threads = v == BlurVariant::Parallel ? ctx.threads : 1;
            outs.push_back(run_blur(v, src, k1, threads));
        }
        for (std::size_t i = 0; i < variants.size(); ++i) {
            for (std::size_t j = i + 1; j < variants.size(); ++j) {
                const float d = interior_max_abs_diff(outs[i], outs[j], margin);
                if (!(d <= 1e-4f)) {
                    std::cerr << "membench: correctness failure: blur variants '"
                              << blur_variant_name(variants[i]) << "' and '"
                              << blur_variant_name(variants[j])
                              << "' disagree (max |diff| = " << d << ")\n";
                    return 1;
                }
                const bool twin_pair = (variants[i] == BlurVariant::SeparableMem &&
                                        variants[j] == BlurVariant::Parallel);
                if (twin_pair && outs[i].data != outs[j].data) {
                    std::cerr << "membench: correctness failure: blur variant 'parallel' is "
                                 "not bit-exact against 'memory'\n";
                    return 1;
                }
            }
        }
    }

    std::optional<double> naive_best;
    for (BlurVariant v : variants) {
        const char* vname = blur_variant_name(v);
        const int threads = v == BlurVariant::Parallel ? ctx.threads : 1;

        const TimingStats stats = measure(
            [&] {
                const Image out = run_blur(v, src, k1, threads);
                do_not_optimize(out.data.data());
            },
            ctx.policy);

        RunRecord r;
        r.suite = "blur";
        r.variant = vname;
        r.device = ctx.profile.name;
        r.w = src.w;
        r.h = src.h;
        r.c = src.c;
        r.f = o.filter_size;
        r.threads = threads;
        r.stats = stats;
        r.timestamp = iso8601_utc_now();

        if (blur_has_utilization_model(v)) {
            attach_utilization(ctx, r,
                               blur_separable_traffic(src.w, src.h, src.c, o.filter_size));
        }

        if (v == BlurVariant::Naive) {
            naive_best = stats.best_s;
            r.speedup = 1.0;
            r.t_naive_s = stats.best_s;
        } else if (naive_best) {
            const SpeedupRecord s = speedup(*naive_best, stats.best_s, vname);
            r.speedup = s.speedup;
            r.t_naive_s = *naive_best;
        }
        ctx.records.push_back(std::move(r));
    }
    return 0;
}

// ---------------------------------------------------------------------------
// charts

std::string fmt_dims(const RunRecord& r) {
    return std::to_string(r.w.value_or(0)) + "x" + std::to_string(r.h.value_or(0)) + "x" +
           std::to_string(r.c.value_or(0));
}

std::optional<ChartSpec> stream_chart(const std::vector<RunRecord>& records) {
    ChartSpec spec;
    spec.kind = ChartKind::Bandwidth;
    spec.y_label = "bandwidth, GB/s";
    std::vector<std::string> group_keys;
    std::map<std::string, ChartGroup> groups;
    std::string device;
    for (const RunRecord& r : records) {
        if (r.suite != "stream" || !r.bandwidth_Bps || !r.level || !r.kind) continue;
        device = r.device;
        const bool scaled = r.scaled_by_cores.value_or(1) > 1;
        const std::string label =
            scaled ? *r.level + " (1 core x" + std::to_string(*r.scaled_by_cores) + ")"
                   : *r.level + " (" + std::to_string(r.threads) +
                         (r.threads == 1 ? " thread)" : " threads)");
        if (!groups.count(label)) {
            group_keys.push_back(label);
            groups[label].label = label;
        }
        groups[label].bars.push_back(ChartBar{*r.kind, *r.bandwidth_Bps / 1e9, std::nullopt,
                                              false});
    }
    if (group_keys.empty()) return std::nullopt;
    for (const std::string& key : group_keys) spec.groups.push_back(groups[key]);
    spec.title = "Memory bandwidth by hierarchy level - " + device;
    return spec;
}

std::optional<ChartSpec> time_chart(const std::vector<RunRecord>& records,
                                    const std::string& suite, const std::string& title_prefix) {
    ChartSpec spec;
    spec.kind = ChartKind::Time;
    spec.y_label = "time, s";
    std::vector<std::string> group_keys;
    std::map<std::string, ChartGroup> groups;
    std::string device;
    for (const RunRecord& r : records) {
        if (r.suite != suite) continue;
        device = r.device;
        const std::string label = suite == "transpose"
                                      ? "n=" + std::to_string(r.n.value_or(0))
                                      : fmt_dims(r) + ", f=" + std::to_string(r.f.value_or(0));
        if (!groups.count(label)) {
            group_keys.push_back(label);
            groups[label].label = label;
        }
        ChartGroup& g = groups[label];
        const bool is_naive = r.variant == "naive";
        if (is_naive) g.naive_time_s = r.stats.best_s;
        g.bars.push_back(ChartBar{r.variant, r.stats.best_s,
                                  is_naive ? std::nullopt : r.speedup, false});
    }
    if (group_keys.empty()) return std::nullopt;
    for (const std::string& key : group_keys) spec.groups.push_back(groups[key]);
    spec.title = title_prefix + " - " + device;
    return spec;
}

std::optional<ChartSpec> utilization_chart(const std::vector<RunRecord>& records) {
    ChartSpec spec;
    spec.kind = ChartKind::Utilization;
    spec.y_label = "fraction of stream baseline";
    std::vector<std::string> group_keys;
    std::map<std::string, ChartGroup> groups;
    std::string device;
    for (const RunRecord& r : records) {
        if (!r.utilization || r.suite == "stream") continue;
        device = r.device;
        const std::string label =
            r.suite == "transpose"
                ? "transpose n=" + std::to_string(r.n.value_or(0))
                : "blur " + fmt_dims(r) + ", f=" + std::to_string(r.f.value_or(0));
        if (!groups.count(label)) {
            group_keys.push_back(label);
            groups[label].label = label;
        }
        groups[label].bars.push_back(
            ChartBar{r.variant, *r.utilization, std::nullopt, r.overflow});
    }
    if (group_keys.empty()) return std::nullopt;
    for (const std::string& key : group_keys) spec.groups.push_back(groups[key]);
    spec.title = "Memory-bandwidth utilization - " + device;
    return spec;
}

std::vector<std::pair<std::string, std::string>> build_charts(
    const std::vector<RunRecord>& records) {
    std::vector<std::pair<std::string, std::string>> out;
    if (const auto spec = stream_chart(records)) {
        out.emplace_back("stream_bandwidth.svg", render_chart(*spec));
    }
    if (const auto spec = time_chart(records, "transpose", "In-place transpose time")) {
        out.emplace_back("transpose_time.svg", render_chart(*spec));
    }
    if (const auto spec = time_chart(records, "blur", "Gaussian blur time")) {
        out.emplace_back("blur_time.svg", render_chart(*spec));
    }
    if (const auto spec = utilization_chart(records)) {
        out.emplace_back("utilization.svg", render_chart(*spec));
    }
    return out;
}

// ---------------------------------------------------------------------------
// output plumbing

int finalize_outputs(Context& ctx, const ordered_json& config,
                     const std::vector<std::pair<std::string, std::string>>& charts) {
    fs::create_directories(ctx.out);
    write_text_file(ctx.out / "config.json", config.dump(2) + "\n");

    int written_files = 1;
    if (!ctx.records.empty()) {
        if (ctx.format == "csv" || ctx.format == "both") {
            write_text_file(ctx.out / "records.csv", emit_csv(ctx.records));
            ++written_files;
        }
        if (ctx.format == "json" || ctx.format == "both") {
            write_text_file(ctx.out / "records.json", emit_json(ctx.records));
            ++written_files;
        }
    }
    if (!ctx.notes.empty()) {
        std::string text;
        for (const std::string& n : ctx.notes) text += n + "\n";
        write_text_file(ctx.out / "skips.txt", text);
        ++written_files;
    }
    for (const auto& [name, svg] : charts) {
        write_text_file(ctx.out / name, svg);
        ++written_files;
    }

    std::cout << "membench: " << ctx.records.size() << " record(s), " << charts.size()
              << " chart(s), " << written_files << " file(s) in " << ctx.out.string() << "\n";
    return 0;
}

ordered_json effective_config(const std::string& command, const Options& o,
                              const Context& ctx) {
    ordered_json j;
    j["command"] = command;
    j["profile"] = o.profile_path;
    j["device"] = ctx.profile.name;
    j["out"] = o.out_dir;
    j["format"] = o.format;
    j["reps"] = o.reps;
    j["warmup"] = o.warmup;
    if (o.budget_s > 0.0) j["budget_s"] = o.budget_s;
    j["threads"] = ctx.threads;
    j["seed"] = o.seed;
    if (!o.baseline_path.empty()) j["baseline"] = o.baseline_path;
    if (command == "transpose" || command == "suite") {
        j["sizes"] = o.sizes;
        j["block"] = o.block;
        j["transpose_variants"] =
            o.transpose_variants.empty() ? ordered_json("all") : ordered_json(o.transpose_variants);
    }
    if (command == "blur" || command == "suite") {
        if (!o.image_path.empty()) {
            j["image"] = o.image_path;
        } else {
            j["synthetic"] = o.synthetic;
            j["w"] = o.img_w;
            j["h"] = o.img_h;
            j["c"] = o.img_c;
        }
        j["filter_size"] = o.filter_size;
        j["sigma"] = o.sigma > 0.0 ? o.sigma : default_sigma(o.filter_size);
        j["blur_variants"] =
            o.blur_variants.empty() ? ordered_json("all") : ordered_json(o.blur_variants);
    }
    if (command == "suite" && !o.skips.empty()) j["skip"] = o.skips;
    return j;
}

int cmd_chart(const Options& o) {
    const std::string text = read_text_file(o.records_path);
    std::vector<RunRecord> records;
    if (o.records_path.size() >= 4 &&
        o.records_path.substr(o.records_path.size() - 4) == ".csv") {
        records = parse_csv(text);
    } else {
        records = parse_json(text);
    }
    const auto charts = build_charts(records);
    if (charts.empty()) {
        std::cerr << "membench: no chartable records in '" << o.records_path << "'\n";
        return 1;
    }
    fs::create_directories(o.out_dir);
    for (const auto& [name, svg] : charts) {
        write_text_file(fs::path(o.out_dir) / name, svg);
        std::cout << "membench: wrote " << (fs::path(o.out_dir) / name).string() << "\n";
    }
    return 0;
}

bool suite_skipped(const Options& o, const std::string& name) {
    return std::find(o.skips.begin(), o.skips.end(), name) != o.skips.end();
}

int run_command(const std::string& command, const Options& o) {
    if (command == "chart") return cmd_chart(o);

    Context ctx;
    ctx.profile = load_device_profile(o.profile_path);
    ctx.policy.warmup_runs = o.warmup;
    ctx.policy.measured_runs = o.reps;
    if (o.budget_s > 0.0) ctx.policy.time_budget_s = o.budget_s;
    ctx.threads = o.threads > 0 ? o.threads : ctx.profile.core_count;
    ctx.seed = o.seed;
    ctx.out = o.out_dir;
    ctx.format = o.format;

    require_fine_clock();

    if (!o.baseline_path.empty()) {
        ctx.baselines = baselines_from_file(o.baseline_path, ctx.profile.last_level().name);
    }

    const std::uint64_t block = o.block > 0 ? o.block : default_block_elems(ctx.profile);

    int status = 0;
    std::vector<std::pair<std::string, std::string>> charts;

    if (command == "stream") {
        status = cmd_stream(ctx);
    } else if (command == "transpose") {
        status = cmd_transpose(ctx, o.sizes, block, o.transpose_variants);
    } else if (command == "blur") {
        status = cmd_blur(ctx, o);
    } else if (command == "suite") {
        const bool do_stream = !suite_skipped(o, "stream");
        const bool do_transpose = !suite_skipped(o, "transpose");
        const bool do_blur = !suite_skipped(o, "blur");
        if (!do_stream && !ctx.baselines && (do_transpose || do_blur)) {
            std::cerr << "membench: utilization needs stream baselines: run the stream "
                         "suite first or pass --baseline <records.json>\n";
            return 1;
        }
        if (do_stream && cmd_stream(ctx) != 0) status = 1;
        if (do_transpose && cmd_transpose(ctx, o.sizes, block, o.transpose_variants) != 0) {
            status = 1;
        }
        if (do_blur && cmd_blur(ctx, o) != 0) status = 1;
        charts = build_charts(ctx.records);
    }

    finalize_outputs(ctx, effective_config(command, o, ctx), charts);
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "membench: portable benchmarks for memory-bound kernels - bandwidth "
        "hierarchy sweeps, in-place matrix transposition, Gaussian blur"};
    app.require_subcommand(1);
    // One section per subcommand in the file (e.g. [suite] reps=5). The
    // flag falls through from subcommands, so it may appear before or after
    // the subcommand name; explicit flags take precedence over file values.
    app.set_config("--config", "", "Read options from a TOML/INI file (one section per subcommand)");

    Options o;

    const auto add_common = [&](CLI::App* sub) {
        sub->fallthrough();
        sub->add_option("--profile", o.profile_path,
                        "Device profile JSON (name, core count, memory levels)")
            ->required();
        sub->add_option("--out", o.out_dir, "Output directory")
            ->capture_default_str();
        sub->add_option("--format", o.format, "Record format")
            ->check(CLI::IsMember({"csv", "json", "both"}))
            ->capture_default_str();
        sub->add_option("--reps", o.reps, "Measured repetitions per kernel")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--warmup", o.warmup, "Unmeasured warm-up runs per kernel")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        sub->add_option("--budget", o.budget_s,
                        "Wall-time budget per kernel in seconds (0 = none)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", o.seed, "Seed for random matrices and images")
            ->capture_default_str();
    };
    const auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", o.threads,
                        "Worker threads for parallel variants (default: profile core count)")
            ->check(CLI::PositiveNumber);
    };
    const auto add_baseline = [&](CLI::App* sub) {
        sub->add_option("--baseline", o.baseline_path,
                        "Stream records.json (or {threaded_Bps,single_core_Bps} JSON) "
                        "supplying utilization baselines");
    };
    const auto add_transpose = [&](CLI::App* sub) {
        sub->add_option("--size", o.sizes, "Matrix size n (repeatable)")
            ->delimiter(',')
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--block", o.block,
                        "Tile edge in elements (default: derived from the profile cache)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--variants", o.transpose_variants,
                        "Transpose variants: naive,parallel,blocking,manual_blocking,dynamic")
            ->delimiter(',');
    };
    const auto add_blur = [&](CLI::App* sub, bool own_variants) {
        // The single-letter dimension flags (--h in particular) collide with
        // the default -h help alias, so image subcommands keep --help only.
        sub->set_help_flag("--help", "Print this help message and exit");
        sub->add_option("--image", o.image_path, "Input image (binary PPM, P6)");
        sub->add_option("--synthetic", o.synthetic,
                        "Synthetic input pattern when no --image is given")
            ->check(CLI::IsMember({"constant", "impulse", "gradient", "random"}))
            ->capture_default_str();
        sub->add_option("--w", o.img_w, "Synthetic image width")->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--h", o.img_h, "Synthetic image height")->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--c", o.img_c, "Synthetic image channels (1 or 3)")
            ->check(CLI::IsMember(std::set<std::uint64_t>{1, 3}))
            ->capture_default_str();
        sub->add_option("--filter-size", o.filter_size, "Gaussian filter taps (odd)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--sigma", o.sigma,
                        "Gaussian standard deviation (0 = default for the filter size)");
        if (own_variants) {
            sub->add_option("--variants", o.blur_variants,
                            "Blur variants: naive,unit_stride,1d_kernels,memory,parallel")
                ->delimiter(',');
        } else {
            sub->add_option("--blur-variants", o.blur_variants,
                            "Blur variants: naive,unit_stride,1d_kernels,memory,parallel")
                ->delimiter(',');
        }
    };

    CLI::App* stream = app.add_subcommand("stream", "Bandwidth sweep across the memory hierarchy");
    add_common(stream);

    CLI::App* transpose = app.add_subcommand("transpose", "In-place transposition ladder");
    add_common(transpose);
    add_threads(transpose);
    add_baseline(transpose);
    add_transpose(transpose);

    CLI::App* blur = app.add_subcommand("blur", "Gaussian blur ladder");
    add_common(blur);
    add_threads(blur);
    add_baseline(blur);
    add_blur(blur, /*own_variants=*/true);

    CLI::App* suite = app.add_subcommand(
        "suite", "Stream sweep, then transpose and blur, then charts");
    add_common(suite);
    add_threads(suite);
    add_baseline(suite);
    add_transpose(suite);
    add_blur(suite, /*own_variants=*/false);
    suite->add_option("--skip", o.skips, "Skip a suite: stream, transpose or blur")
        ->delimiter(',')
        ->check(CLI::IsMember({"stream", "transpose", "blur"}));

    CLI::App* chart = app.add_subcommand("chart", "Render charts from a saved record file");
    chart->fallthrough();
    chart->add_option("--records", o.records_path, "records.json or records.csv to render")
        ->required();
    chart->add_option("--out", o.out_dir, "Output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run_command(command, o);
    } catch (const Error& e) {
        std::cerr << "membench: error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "membench: unexpected error: " << e.what() << "\n";
        return 1;
    }
}
