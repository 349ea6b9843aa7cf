#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "vmac/error.hpp"
#include "vmac/random.hpp"
#include "vmac/rate.hpp"
#include "vmac/stats.hpp"
#include "vmac/trace.hpp"

namespace vmac {

struct ExperimentConfig {
    std::vector<TracePtr> trace_library;
    std::vector<std::size_t> flow_counts;
    std::uint64_t window_slots = 5;
    std::size_t runs_per_rep = 100;
    std::size_t reps = 5;
    std::uint64_t master_seed = 1;
    double confidence = 0.95;
    /// Length of the rate time series behind the burstiness table.
    std::uint64_t timeseries_slots = 3000;
    /// Worker threads for independent runs; 0 picks the hardware count.
    /// Results do not depend on this value.
    unsigned threads = 1;
};

struct SweepRow {
    std::size_t flow_count = 0;
    MeanWithCI probability;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

struct TimeSeriesResult {
    std::vector<std::uint64_t> slots;
    std::vector<double> instantaneous;
    std::vector<double> average;
};

enum class RateKind { Average, Instantaneous, AveragePeriodic, InstantaneousPeriodic };

constexpr std::string_view to_string(RateKind k) noexcept {
    switch (k) {
    case RateKind::Average: return "average";
    case RateKind::Instantaneous: return "instantaneous";
    case RateKind::AveragePeriodic: return "average_periodic";
    case RateKind::InstantaneousPeriodic: return "instantaneous_periodic";
    }
    return "unknown";
}

struct BurstinessRow {
    std::size_t flow_count = 0;
    RateKind kind = RateKind::Average;
    double peak_to_mean = 0.0;
    double cov = 0.0;
};

struct WindowRow {
    std::uint64_t window_slots = 0;
    MeanWithCI probability;
};

struct ContentRow {
    ContentClass content = ContentClass::Unknown;
    std::size_t flow_count = 0;
    MeanWithCI probability;
};

// Seed streams. A flow-count sweep, a window sweep and a content comparison at
// the same flow count share run seeds, so they compare like with like.
inline constexpr std::uint64_t kSweepStream = 0x5357454550ULL;
inline constexpr std::uint64_t kTimeseriesStream = 0x54494d45ULL;

namespace detail {

inline std::uint64_t shortest_trace(std::span<const TracePtr> library) {
    std::uint64_t len = std::numeric_limits<std::uint64_t>::max();
    for (const auto& t : library) len = std::min<std::uint64_t>(len, t->length());
    return len;
}

inline void validate_library(std::span<const TracePtr> library, std::uint64_t window_slots) {
    if (library.empty()) throw Error(Errc::EmptyLibrary, "trace library is empty");
    for (const auto& t : library) {
        if (!t) throw Error(Errc::InvalidArgument, "null trace in library");
        if (t->fps() != library.front()->fps())
            throw Error(Errc::MixedFps, "all traces in one experiment must share a frame rate");
    }
    if (window_slots == 0) throw Error(Errc::InvalidArgument, "window must span at least one slot");
    if (shortest_trace(library) < window_slots)
        throw Error(Errc::InsufficientHistory, "a trace is shorter than the " + std::to_string(window_slots) +
                                                   "-slot measurement window");
}

inline void validate_counts(std::span<const std::size_t> counts) {
    if (counts.empty()) throw Error(Errc::InvalidArgument, "no flow counts requested");
    for (auto n : counts)
        if (n == 0) throw Error(Errc::InvalidArgument, "flow counts must be at least 1");
}

inline void validate_repetitions(const ExperimentConfig& cfg) {
    if (cfg.runs_per_rep == 0) throw Error(Errc::InvalidArgument, "runs per repetition must be positive");
    if (cfg.reps < 2) throw Error(Errc::TooShort, "need at least two repetitions for a confidence interval");
    if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0))
        throw Error(Errc::InvalidArgument, "confidence must be in (0,1)");
}

inline unsigned worker_count(unsigned requested, std::size_t jobs) {
    unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Runs job(i) for i in [0, jobs). Each job writes only its own output slot,
/// so the merged result is independent of scheduling.
template <typename Job>
void parallel_for(std::size_t jobs, unsigned threads, Job&& job) {
    const unsigned workers = worker_count(threads, jobs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) job(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < jobs; i += workers) job(i);
        });
    }
}

} // namespace detail

/// Draws `n` flows: each picks a trace uniformly from the library and a start
/// offset uniformly within that trace.
inline std::vector<FlowInstance> draw_flows(std::span<const TracePtr> library, std::size_t n, Engine& eng) {
    std::vector<FlowInstance> flows;
    flows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& trace = library[uniform_index(eng, library.size())];
        flows.push_back(FlowInstance{trace, uniform_index(eng, trace->length()), static_cast<int>(i)});
    }
    return flows;
}

/// Decision slot uniform over one period [L-1, 2L-1) of the shortest trace L.
/// Every window up to L slots fits there, so window sweeps reuse the same
/// decision instant.
inline std::uint64_t draw_decision_slot(std::uint64_t period, Engine& eng) {
    return period - 1 + uniform_index(eng, period);
}

/// The `runs x reps` rate samples behind one probability estimate, in
/// (rep_index, run_index) order. Run seeds are derive_run_seed(key, rep, run).
inline std::vector<RateSample> collect_rate_samples(std::span<const TracePtr> library, std::size_t flow_count,
                                                    std::uint64_t window_slots, std::size_t runs_per_rep,
                                                    std::size_t reps, std::uint64_t key, unsigned threads = 1) {
    detail::validate_library(library, window_slots);
    const std::uint64_t period = detail::shortest_trace(library);
    std::vector<RateSample> out(runs_per_rep * reps);
    detail::parallel_for(out.size(), threads, [&](std::size_t i) {
        Engine eng(derive_run_seed(key, i / runs_per_rep, i % runs_per_rep));
        const auto flows = draw_flows(library, flow_count, eng);
        const MeasurementWindow w{draw_decision_slot(period, eng), window_slots};
        out[i] = rate_sample(flows, w);
    });
    return out;
}

namespace detail {

inline MeanWithCI probability_with_ci(std::span<const TracePtr> library, std::size_t flow_count,
                                      std::uint64_t window_slots, const ExperimentConfig& cfg) {
    const auto key = derive_run_seed(cfg.master_seed, kSweepStream, flow_count);
    const auto samples =
        collect_rate_samples(library, flow_count, window_slots, cfg.runs_per_rep, cfg.reps, key, cfg.threads);
    std::vector<double> per_rep(cfg.reps);
    const std::span<const RateSample> all(samples);
    for (std::size_t r = 0; r < cfg.reps; ++r)
        per_rep[r] = empirical_probability_avg_below_inst(all.subspan(r * cfg.runs_per_rep, cfg.runs_per_rep));
    return mean_and_ci(per_rep, cfg.confidence);
}

} // namespace detail

/// Probability that the windowed average is below the instantaneous aggregate,
/// per flow count: one estimate per repetition, then mean and t-interval.
inline SweepResult run_probability_sweep(const ExperimentConfig& cfg) {
    detail::validate_library(cfg.trace_library, cfg.window_slots);
    detail::validate_counts(cfg.flow_counts);
    detail::validate_repetitions(cfg);
    SweepResult out;
    for (auto n : cfg.flow_counts)
        out.rows.push_back({n, detail::probability_with_ci(cfg.trace_library, n, cfg.window_slots, cfg)});
    return out;
}

/// Per-slot instantaneous aggregate and trailing-window average for one fixed
/// random flow set, over every slot in [window-1, duration).
inline TimeSeriesResult run_rate_timeseries(const ExperimentConfig& cfg, std::size_t flow_count,
                                            std::uint64_t duration_slots, std::uint64_t seed) {
    detail::validate_library(cfg.trace_library, cfg.window_slots);
    if (flow_count == 0) throw Error(Errc::InvalidArgument, "flow count must be at least 1");
    const auto w = cfg.window_slots;
    if (duration_slots < w) throw Error(Errc::InsufficientHistory, "duration shorter than the measurement window");

    Engine eng(derive_run_seed(seed, kTimeseriesStream, flow_count));
    const auto flows = draw_flows(cfg.trace_library, flow_count, eng);

    std::vector<std::uint64_t> bytes(duration_slots);
    for (std::uint64_t k = 0; k < duration_slots; ++k) bytes[k] = detail::aggregate_bytes(flows, k);

    TimeSeriesResult out;
    const auto rows = duration_slots - w + 1;
    out.slots.reserve(rows);
    out.instantaneous.reserve(rows);
    out.average.reserve(rows);
    std::uint64_t window_sum = 0;
    for (std::uint64_t k = 0; k < duration_slots; ++k) {
        window_sum += bytes[k];
        if (k >= w) window_sum -= bytes[k - w];
        if (k + 1 < w) continue;
        out.slots.push_back(k);
        out.instantaneous.push_back(detail::bytes_to_bps(static_cast<double>(bytes[k]), flows));
        out.average.push_back(
            detail::bytes_to_bps(static_cast<double>(window_sum) / static_cast<double>(w), flows));
    }
    return out;
}

/// Peak-to-mean ratio and coefficient of variation of both rate series.
///
/// For each flow count, a time series of cfg.timeseries_slots slots is drawn
/// with seed cfg.master_seed. The per-slot series are the primary rows; the
/// `_periodic` rows keep one sample per non-overlapping measurement period
/// (the end of each window), as a decision-instant view of the same data.
inline std::vector<BurstinessRow> run_burstiness_table(const ExperimentConfig& cfg,
                                                       std::span<const std::size_t> flow_counts) {
    detail::validate_library(cfg.trace_library, cfg.window_slots);
    detail::validate_counts(flow_counts);
    std::vector<BurstinessRow> out;
    for (auto n : flow_counts) {
        const auto ts = run_rate_timeseries(cfg, n, cfg.timeseries_slots, cfg.master_seed);
        std::vector<double> avg_periodic, inst_periodic;
        for (std::size_t i = 0; i < ts.slots.size(); i += cfg.window_slots) {
            avg_periodic.push_back(ts.average[i]);
            inst_periodic.push_back(ts.instantaneous[i]);
        }
        auto row = [&](RateKind kind, const std::vector<double>& s) {
            out.push_back({n, kind, peak_to_mean(s), coefficient_of_variation(s)});
        };
        row(RateKind::Average, ts.average);
        row(RateKind::Instantaneous, ts.instantaneous);
        row(RateKind::AveragePeriodic, avg_periodic);
        row(RateKind::InstantaneousPeriodic, inst_periodic);
    }
    return out;
}

/// Probability estimate at one flow count for each window length.
inline std::vector<WindowRow> run_window_sweep(const ExperimentConfig& cfg, std::size_t flow_count,
                                               std::span<const std::uint64_t> window_list) {
    if (window_list.empty()) throw Error(Errc::InvalidArgument, "no window lengths requested");
    if (flow_count == 0) throw Error(Errc::InvalidArgument, "flow count must be at least 1");
    detail::validate_repetitions(cfg);
    for (auto w : window_list) detail::validate_library(cfg.trace_library, w);
    std::vector<WindowRow> out;
    for (auto w : window_list) out.push_back({w, detail::probability_with_ci(cfg.trace_library, flow_count, w, cfg)});
    return out;
}

/// Probability sweep restricted to the traces of each content class.
inline std::vector<ContentRow> run_content_comparison(const ExperimentConfig& cfg,
                                                      std::span<const ContentClass> classes,
                                                      std::span<const std::size_t> flow_counts) {
    if (classes.empty()) throw Error(Errc::InvalidArgument, "no content classes requested");
    detail::validate_library(cfg.trace_library, cfg.window_slots);
    detail::validate_counts(flow_counts);
    detail::validate_repetitions(cfg);

    std::vector<std::vector<TracePtr>> per_class;
    for (auto c : classes) {
        std::vector<TracePtr> sub;
        for (const auto& t : cfg.trace_library)
            if (t->content_class() == c) sub.push_back(t);
        if (sub.empty())
            throw Error(Errc::ClassMissing, "library has no traces of class '" + std::string(to_string(c)) + "'");
        per_class.push_back(std::move(sub));
    }

    std::vector<ContentRow> out;
    for (std::size_t ci = 0; ci < classes.size(); ++ci)
        for (auto n : flow_counts)
            out.push_back({classes[ci], n, detail::probability_with_ci(per_class[ci], n, cfg.window_slots, cfg)});
    return out;
}

} // namespace vmac
