#pragma once

namespace vmac {

/// Rates are carried in bits per second everywhere inside the library.
inline constexpr double kBitsPerMbps = 1e6;

constexpr double mbps(double v) noexcept { return v * kBitsPerMbps; }
constexpr double to_mbps(double bps) noexcept { return bps / kBitsPerMbps; }

} // namespace vmac
