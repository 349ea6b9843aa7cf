#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "vmac/error.hpp"
#include "vmac/trace.hpp"

namespace vmac {

/// Trailing window of `length_slots` frame slots ending at (and including)
/// the decision slot `end_slot`.
struct MeasurementWindow {
    std::uint64_t end_slot = 0;
    std::uint64_t length_slots = 1;

    [[nodiscard]] std::uint64_t first_slot() const noexcept { return end_slot + 1 - length_slots; }
};

inline void validate(const MeasurementWindow& w) {
    if (w.length_slots < 1) throw Error(Errc::InvalidArgument, "window must span at least one slot");
    if (w.end_slot + 1 < w.length_slots)
        throw Error(Errc::WindowOutOfRange, "window end slot " + std::to_string(w.end_slot) +
                                                " precedes a full window of " + std::to_string(w.length_slots));
}

/// Instantaneous aggregate at the window's last slot and the windowed mean.
struct RateSample {
    double instantaneous = 0.0;
    double average = 0.0;
    MeasurementWindow window;
};

/// Throws MixedFps unless every flow's trace has the same frame rate.
inline void require_common_fps(std::span<const FlowInstance> flows) {
    for (const auto& f : flows) {
        if (f.trace->fps() != flows.front().trace->fps())
            throw Error(Errc::MixedFps, "flows must share one frame rate");
    }
}

// Aggregates are summed in whole bytes and converted to bits/s once. Because
// flows share one fps, this equals the sum of per-flow rates, and a window of
// identical slots averages to exactly the per-slot value.
namespace detail {

inline std::uint64_t aggregate_bytes(std::span<const FlowInstance> flows, std::uint64_t slot) noexcept {
    std::uint64_t sum = 0;
    for (const auto& f : flows) sum += flow_bytes_at(f, slot);
    return sum;
}

inline double bytes_to_bps(double bytes_per_slot, std::span<const FlowInstance> flows) noexcept {
    return flows.empty() ? 0.0 : bytes_per_slot * 8.0 * flows.front().trace->fps();
}

inline double window_mean_bytes(std::span<const FlowInstance> flows, const MeasurementWindow& w) noexcept {
    std::uint64_t total = 0;
    for (std::uint64_t k = w.first_slot(); k <= w.end_slot; ++k) total += aggregate_bytes(flows, k);
    return static_cast<double>(total) / static_cast<double>(w.length_slots);
}

} // namespace detail

/// Sum of every flow's rate at `slot` (bits/s); zero for no flows.
inline double instantaneous_aggregate_rate(std::span<const FlowInstance> flows, std::uint64_t slot) {
    require_common_fps(flows);
    return detail::bytes_to_bps(static_cast<double>(detail::aggregate_bytes(flows, slot)), flows);
}

/// Mean of the per-slot aggregate over the window.
///
/// Rates are constant within a slot, so this rectangular sum is the exact
/// time integral of the aggregate divided by the window duration.
inline double average_aggregate_rate(std::span<const FlowInstance> flows, const MeasurementWindow& window) {
    validate(window);
    require_common_fps(flows);
    return detail::bytes_to_bps(detail::window_mean_bytes(flows, window), flows);
}

inline RateSample rate_sample(std::span<const FlowInstance> flows, const MeasurementWindow& window) {
    validate(window);
    require_common_fps(flows);
    RateSample s;
    s.window = window;
    s.instantaneous =
        detail::bytes_to_bps(static_cast<double>(detail::aggregate_bytes(flows, window.end_slot)), flows);
    s.average = detail::bytes_to_bps(detail::window_mean_bytes(flows, window), flows);
    return s;
}

} // namespace vmac
