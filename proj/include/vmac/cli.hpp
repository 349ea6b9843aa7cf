#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vmac/admission.hpp"
#include "vmac/bounds.hpp"
#include "vmac/error.hpp"
#include "vmac/experiments.hpp"
#include "vmac/library.hpp"
#include "vmac/stats.hpp"
#include "vmac/table.hpp"
#include "vmac/trace.hpp"
#include "vmac/units.hpp"

// Subcommand bodies for the `vmac` tool, kept apart from argument parsing so
// they can be driven directly from tests.
namespace vmac::cli {

enum ExitCode : int { kOk = 0, kReject = 1, kUsage = 2, kData = 3 };

inline int exit_code_for(Errc e) noexcept {
    switch (e) {
    case Errc::InvalidArgument:
    case Errc::DegenerateRanges:
    case Errc::WindowOutOfRange:
    case Errc::TooShort:
        return kUsage;
    default:
        return kData;
    }
}

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr std::uint64_t kAdmitStream = 0x41444d4954ULL;

/// --seed wins, then VMAC_SEED, then the built-in default.
inline std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("VMAC_SEED"); env && *env) {
        std::uint64_t v = 0;
        std::string_view s(env);
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size())
            throw Error(Errc::InvalidArgument, "VMAC_SEED is not an unsigned integer: " + std::string(env));
        return v;
    }
    return kDefaultSeed;
}

/// "5:40:5" (inclusive range), "2,5,10" (list) or "7".
inline std::vector<std::size_t> parse_count_list(std::string_view spec) {
    auto num = [&](std::string_view s) {
        std::size_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
            throw Error(Errc::InvalidArgument, "not a count: '" + std::string(s) + "' in '" + std::string(spec) + "'");
        return v;
    };
    std::vector<std::size_t> out;
    if (spec.find(':') != std::string_view::npos) {
        const auto a = spec.find(':');
        const auto b = spec.find(':', a + 1);
        const auto lo = num(spec.substr(0, a));
        const auto hi = num(spec.substr(a + 1, b == std::string_view::npos ? std::string_view::npos : b - a - 1));
        const auto step = b == std::string_view::npos ? 1 : num(spec.substr(b + 1));
        if (step == 0 || hi < lo) throw Error(Errc::InvalidArgument, "bad range '" + std::string(spec) + "'");
        for (auto v = lo; v <= hi; v += step) out.push_back(v);
    } else {
        std::size_t b = 0;
        for (;;) {
            const auto e = spec.find(',', b);
            out.push_back(num(spec.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b)));
            if (e == std::string_view::npos) break;
            b = e + 1;
        }
    }
    for (auto v : out)
        if (v == 0) throw Error(Errc::InvalidArgument, "counts must be positive");
    return out;
}

inline std::vector<double> parse_real_list(std::string_view spec) {
    std::vector<double> out;
    std::size_t b = 0;
    for (;;) {
        const auto e = spec.find(',', b);
        auto item = spec.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b);
        auto v = detail::parse_double(detail::trim(item));
        if (!v) throw Error(Errc::InvalidArgument, "not a number: '" + std::string(item) + "'");
        out.push_back(*v);
        if (e == std::string_view::npos) break;
        b = e + 1;
    }
    return out;
}

/// Options shared by the experiment commands.
struct ExperimentOptions {
    std::filesystem::path traces_dir;
    std::optional<double> fps_override;
    std::uint64_t window = 5;
    std::size_t runs = 100;
    std::size_t reps = 5;
    std::optional<std::uint64_t> seed;
    double confidence = 0.95;
    std::uint64_t duration = 3000;
    unsigned threads = 1;
    std::optional<std::filesystem::path> out_path;
};

inline ExperimentConfig make_config(const ExperimentOptions& o) {
    if (o.window == 0) throw Error(Errc::InvalidArgument, "--window must be at least 1");
    if (o.runs == 0) throw Error(Errc::InvalidArgument, "--runs must be positive");
    if (o.reps < 2) throw Error(Errc::InvalidArgument, "--reps must be at least 2");
    if (!(o.confidence > 0.0 && o.confidence < 1.0)) throw Error(Errc::InvalidArgument, "--confidence must be in (0,1)");
    ExperimentConfig cfg;
    cfg.master_seed = resolve_seed(o.seed);
    cfg.trace_library = load_trace_dir(o.traces_dir, o.fps_override);
    cfg.window_slots = o.window;
    cfg.runs_per_rep = o.runs;
    cfg.reps = o.reps;
    cfg.confidence = o.confidence;
    cfg.timeseries_slots = o.duration;
    cfg.threads = o.threads;
    return cfg;
}

inline void emit(const OutputTable& t, const std::optional<std::filesystem::path>& path, std::ostream& out) {
    if (!path) {
        write_csv(out, t);
        return;
    }
    std::ofstream f(*path, std::ios::binary);
    if (!f) throw Error(Errc::Io, "cannot write " + path->string());
    write_csv(f, t);
    if (!f) throw Error(Errc::Io, "write failed for " + path->string());
}

// --- ingest -----------------------------------------------------------------

inline std::string ingest_summary(const VideoTrace& t) {
    std::vector<double> rates(t.length());
    for (std::size_t k = 0; k < t.length(); ++k) rates[k] = to_mbps(t.frame_rate_bps(k));
    const auto s = summarize(rates);
    const double lo = *std::min_element(rates.begin(), rates.end());
    std::ostringstream os;
    os << "frames=" << t.length() << " fps=" << format_short(t.fps()) << " mean=" << format_short(s.mean)
       << "Mbps peak=" << format_short(s.peak) << "Mbps min=" << format_short(lo) << "Mbps";
    if (t.content_class() != ContentClass::Unknown) os << " class=" << to_string(t.content_class());
    return os.str();
}

inline int cmd_ingest(const std::filesystem::path& path, std::optional<double> fps, std::ostream& out) {
    out << ingest_summary(parse_trace_file(path, fps)) << '\n';
    return kOk;
}

// --- experiments ------------------------------------------------------------

inline int cmd_sweep_flows(const ExperimentOptions& o, const std::vector<std::size_t>& flows, std::ostream& out) {
    auto cfg = make_config(o);
    cfg.flow_counts = flows;
    const auto res = run_probability_sweep(cfg);
    OutputTable t{{"flows", "prob_mean", "ci_half_width", "confidence"}, {}};
    for (const auto& r : res.rows)
        t.add_row({std::to_string(r.flow_count), format_number(r.probability.mean),
                   format_number(r.probability.ci_half_width), format_number(r.probability.confidence)});
    emit(t, o.out_path, out);
    return kOk;
}

inline int cmd_timeseries(const ExperimentOptions& o, std::size_t flows, std::ostream& out) {
    const auto cfg = make_config(o);
    const auto ts = run_rate_timeseries(cfg, flows, o.duration, cfg.master_seed);
    OutputTable t{{"slot", "inst_bps", "avg_bps"}, {}};
    for (std::size_t i = 0; i < ts.slots.size(); ++i)
        t.add_row({std::to_string(ts.slots[i]), format_number(ts.instantaneous[i]), format_number(ts.average[i])});
    emit(t, o.out_path, out);
    return kOk;
}

inline int cmd_burstiness(const ExperimentOptions& o, const std::vector<std::size_t>& flows, std::ostream& out) {
    const auto cfg = make_config(o);
    const auto rows = run_burstiness_table(cfg, flows);
    OutputTable t{{"flows", "rate_kind", "pmr", "cov"}, {}};
    for (const auto& r : rows)
        t.add_row({std::to_string(r.flow_count), std::string(to_string(r.kind)), format_number(r.peak_to_mean),
                   format_number(r.cov)});
    emit(t, o.out_path, out);
    return kOk;
}

inline int cmd_sweep_window(const ExperimentOptions& o, std::size_t flows, const std::vector<std::size_t>& windows,
                            std::ostream& out) {
    const auto cfg = make_config(o);
    const std::vector<std::uint64_t> ws(windows.begin(), windows.end());
    const auto rows = run_window_sweep(cfg, flows, ws);
    OutputTable t{{"window_slots", "prob_mean", "ci_half_width"}, {}};
    for (const auto& r : rows)
        t.add_row({std::to_string(r.window_slots), format_number(r.probability.mean),
                   format_number(r.probability.ci_half_width)});
    emit(t, o.out_path, out);
    return kOk;
}

inline std::vector<ContentClass> parse_class_list(std::string_view spec) {
    std::vector<ContentClass> out;
    std::size_t b = 0;
    for (;;) {
        const auto e = spec.find(',', b);
        auto item = spec.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b);
        auto c = parse_content_class(item);
        if (!c) throw Error(Errc::InvalidArgument, "unknown content class '" + std::string(item) + "'");
        out.push_back(*c);
        if (e == std::string_view::npos) break;
        b = e + 1;
    }
    return out;
}

inline int cmd_content(const ExperimentOptions& o, const std::vector<ContentClass>& classes,
                       const std::vector<std::size_t>& flows, std::ostream& out) {
    const auto cfg = make_config(o);
    const auto rows = run_content_comparison(cfg, classes, flows);
    OutputTable t{{"class", "flows", "prob_mean", "ci_half_width"}, {}};
    for (const auto& r : rows)
        t.add_row({std::string(to_string(r.content)), std::to_string(r.flow_count),
                   format_number(r.probability.mean), format_number(r.probability.ci_half_width)});
    emit(t, o.out_path, out);
    return kOk;
}

// --- hoeffding --------------------------------------------------------------

/// `epsilon` and `widths` share one unit (Mbps on the command line); delta is
/// dimensionless, so the unit cancels.
inline int cmd_hoeffding(std::size_t n, double epsilon, const std::vector<double>& widths, std::ostream& out) {
    std::vector<double> w = widths;
    if (w.size() == 1 && n > 1) w.assign(n, widths.front());
    if (w.size() != n)
        throw Error(Errc::InvalidArgument, "expected " + std::to_string(n) + " widths, got " + std::to_string(w.size()));
    HoeffdingQuery q{n, epsilon, {}};
    for (double x : w) {
        if (x < 0.0) throw Error(Errc::InvalidArgument, "range widths must be non-negative");
        q.ranges.push_back({0.0, x});
    }
    const auto r = hoeffding_delta(q);
    out << "delta=" << format_number(r.delta) << " exponent=" << format_number(r.exponent);
    if (r.underflow) out << " underflow=1 delta_min=" << format_short(r.delta);
    out << '\n';
    return kOk;
}

// --- admit ------------------------------------------------------------------

struct AdmitOptions {
    Policy policy = Policy::Average;
    double capacity_mbps = 0.0;
    std::optional<QualityClass> quality;
    std::optional<double> rate_mbps;
    std::filesystem::path traces_dir;
    std::optional<double> fps_override;
    std::size_t flows = 1;
    std::uint64_t window = 5;
    std::optional<std::uint64_t> seed;
    /// Start every flow at frame 0 instead of a random offset.
    bool aligned = false;
    /// Decision slot; drawn at random when absent.
    std::optional<std::uint64_t> decision_slot;
    double target_utilization = 1.0;
};

/// Builds one seeded scenario, measures it and prints the decision.
/// Returns kOk on admit and kReject on reject.
inline int cmd_admit(const AdmitOptions& o, std::ostream& out) {
    if (o.quality.has_value() == o.rate_mbps.has_value())
        throw Error(Errc::InvalidArgument, "give exactly one of --class or --rate-mbps");
    if (!(o.capacity_mbps > 0.0)) throw Error(Errc::InvalidArgument, "--capacity-mbps must be positive");
    if (o.flows == 0) throw Error(Errc::InvalidArgument, "--flows must be at least 1");
    if (o.window == 0) throw Error(Errc::InvalidArgument, "--window must be at least 1");
    const AdmissionRequest req = o.quality ? AdmissionRequest::for_class(*o.quality) : AdmissionRequest{mbps(*o.rate_mbps)};
    if (!(req.requested_rate > 0.0)) throw Error(Errc::InvalidArgument, "--rate-mbps must be positive");
    const LinkConfig link{"l", mbps(o.capacity_mbps), o.target_utilization};

    const auto library = load_trace_dir(o.traces_dir, o.fps_override);
    detail::validate_library(library, o.window);
    Engine eng(derive_run_seed(resolve_seed(o.seed), kAdmitStream, o.flows));
    auto flows = draw_flows(library, o.flows, eng);
    if (o.aligned)
        for (auto& f : flows) f.start_offset = 0;
    std::uint64_t slot = 0;
    if (o.decision_slot) {
        slot = *o.decision_slot;
        if (slot + 1 < o.window)
            throw Error(Errc::InsufficientHistory, "decision slot " + std::to_string(slot) + " has fewer than " +
                                                       std::to_string(o.window) + " slots of history");
    } else {
        slot = draw_decision_slot(detail::shortest_trace(library), eng);
    }

    const auto sample = rate_sample(flows, MeasurementWindow{slot, o.window});
    const auto d = decide(o.policy, sample, req, link);
    out << "policy=" << to_string(d.policy) << " verdict=" << to_string(d.verdict)
        << " measured=" << format_number(to_mbps(d.measured_rate)) << "Mbps"
        << " requested=" << format_number(to_mbps(req.requested_rate)) << "Mbps"
        << " capacity=" << format_number(o.capacity_mbps) << "Mbps"
        << " headroom=" << format_number(to_mbps(d.headroom)) << "Mbps"
        << " instantaneous=" << format_number(to_mbps(sample.instantaneous)) << "Mbps"
        << " average=" << format_number(to_mbps(sample.average)) << "Mbps"
        << " slot=" << slot << '\n';
    return d.verdict == Verdict::Admit ? kOk : kReject;
}

// --- trace generation ---------------------------------------------------------

struct SynthOptions {
    std::string profile = "sports"; // sports | news | cbr | bounded
    std::size_t length = library::kLength;
    double fps = library::kFps;
    double mean_mbps = 5.0;
    double min_mbps = 1.0;
    double max_mbps = 3.0;
    std::optional<std::uint64_t> seed;
    std::string id = "synthetic";
};

inline VideoTrace synth_from_options(const SynthOptions& o) {
    const auto seed = resolve_seed(o.seed);
    if (o.profile == "sports") return synth_vbr_trace(o.id, o.length, o.fps, sports_like_profile(o.mean_mbps, o.fps), seed);
    if (o.profile == "news") return synth_vbr_trace(o.id, o.length, o.fps, news_like_profile(o.mean_mbps, o.fps), seed);
    if (o.profile == "cbr") {
        const auto bytes = static_cast<std::uint64_t>(std::floor(mbps(o.mean_mbps) / (8.0 * o.fps)));
        return synth_cbr_trace(o.id, o.length, o.fps, bytes);
    }
    if (o.profile == "bounded")
        return synth_bounded_trace(o.length, {mbps(o.min_mbps), mbps(o.max_mbps)}, o.fps, seed, o.id);
    throw Error(Errc::InvalidArgument, "unknown profile '" + o.profile + "'");
}

inline int cmd_synth(const SynthOptions& o, const std::optional<std::filesystem::path>& out_path, std::ostream& out) {
    const auto trace = synth_from_options(o);
    if (out_path)
        write_trace_file(*out_path, trace);
    else
        write_trace(out, trace);
    return kOk;
}

inline int cmd_synth_library(const std::filesystem::path& root, std::ostream& out) {
    library::write_all(root);
    out << "wrote bundled traces under " << root.string() << '\n';
    return kOk;
}

} // namespace vmac::cli
