#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "vmac/error.hpp"
#include "vmac/random.hpp"
#include "vmac/rate.hpp"
#include "vmac/trace.hpp"

namespace vmac {

struct HoeffdingQuery {
    std::size_t n = 0;                  // number of flows
    double epsilon = 0.0;               // per-flow deviation, bits/s
    std::vector<FlowRateBounds> ranges; // one per flow
};

struct BoundResult {
    double delta = 1.0;
    double exponent = 0.0;
    /// exp(exponent) fell below the smallest positive double; delta then holds
    /// that smallest value instead of 0.
    bool underflow = false;
};

/// Upper bound on Pr{X_inst >= mean + n*eps}:
///
///     delta = exp(-2 n^2 eps^2 / sum_i (max_i - min_i)^2)
///
/// Evaluated with widths scaled by the largest one so that the squares do
/// not overflow before the ratio is formed.
inline BoundResult hoeffding_delta(const HoeffdingQuery& q) {
    if (q.n == 0) throw Error(Errc::InvalidArgument, "flow count must be positive");
    if (q.ranges.size() != q.n) throw Error(Errc::InvalidArgument, "need one rate range per flow");
    if (!(q.epsilon > 0.0)) throw Error(Errc::InvalidArgument, "epsilon must be positive");

    double widest = 0.0;
    for (const auto& r : q.ranges) {
        if (!(r.max_rate >= r.min_rate)) throw Error(Errc::InvalidArgument, "range with max below min");
        widest = std::max(widest, r.width());
    }
    if (widest == 0.0) throw Error(Errc::DegenerateRanges, "all rate ranges have zero width");

    double scaled_sum = 0.0;
    for (const auto& r : q.ranges) {
        const double w = r.width() / widest;
        scaled_sum += w * w;
    }
    const double ratio = (static_cast<double>(q.n) * q.epsilon / widest) / std::sqrt(scaled_sum);

    BoundResult out;
    out.exponent = -2.0 * ratio * ratio;
    if (!std::isfinite(out.exponent)) out.exponent = std::numeric_limits<double>::lowest();
    out.delta = std::exp(out.exponent);
    if (out.delta == 0.0) {
        out.delta = std::numeric_limits<double>::denorm_min();
        out.underflow = true;
    }
    return out;
}

/// Stream tag so exceedance sampling never shares seeds with experiment runs.
inline constexpr std::uint64_t kExceedanceStream = 0x48'4f'45'46'46ULL;

/// Fraction of random decision instants at which
/// instantaneous >= windowed average + n * epsilon (ties count).
///
/// Sample k draws its decision slot from an engine seeded with
/// derive_run_seed(seed, kExceedanceStream, k), uniformly over one period of
/// the shortest trace starting at the first slot with a full window.
inline double empirical_exceedance(std::span<const FlowInstance> flows, std::uint64_t window_slots, double epsilon,
                                   std::size_t samples, std::uint64_t seed) {
    if (flows.empty()) throw Error(Errc::InvalidArgument, "need at least one flow");
    if (samples == 0) throw Error(Errc::InvalidArgument, "samples must be positive");
    if (window_slots == 0) throw Error(Errc::InvalidArgument, "window must span at least one slot");
    if (epsilon < 0.0) throw Error(Errc::InvalidArgument, "epsilon must be non-negative");
    require_common_fps(flows);

    std::uint64_t period = std::numeric_limits<std::uint64_t>::max();
    for (const auto& f : flows) period = std::min<std::uint64_t>(period, f.trace->length());
    if (period < window_slots)
        throw Error(Errc::InsufficientHistory, "trace shorter than the measurement window");

    const double margin = static_cast<double>(flows.size()) * epsilon;
    std::size_t hits = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        Engine eng(derive_run_seed(seed, kExceedanceStream, k));
        const MeasurementWindow w{window_slots - 1 + uniform_index(eng, period), window_slots};
        const auto s = rate_sample(flows, w);
        hits += s.instantaneous >= s.average + margin ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(samples);
}

} // namespace vmac
