#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace vmac {

// std::mt19937_64 has a fully specified output sequence, but the standard
// distributions do not. Everything below maps raw engine output to values
// with our own arithmetic so results are identical across standard libraries.
using Engine = std::mt19937_64;

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

/// Seed for run `run_index` of repetition `rep_index`.
///
/// Each input passes through a splitmix64 finalizer before being folded into
/// the state, so (s, 1, 0) and (s, 0, 1) land on unrelated values. Only
/// 64-bit unsigned arithmetic is used, so the mapping is platform independent.
constexpr std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t rep_index,
                                        std::uint64_t run_index) noexcept {
    std::uint64_t h = detail::splitmix64(master_seed ^ 0x564d4143ULL);
    h = detail::splitmix64(h ^ detail::splitmix64(rep_index + 0x1000193ULL));
    h = detail::splitmix64(h ^ (detail::splitmix64(run_index + 0x811c9dc5ULL) << 1));
    return h;
}

/// Uniform integer in [0, n). Rejection sampling, no modulo bias.
inline std::uint64_t uniform_index(Engine& eng, std::uint64_t n) {
    if (n <= 1) return 0;
    // 2^64 mod n; values above UINT64_MAX - excess would bias the low residues.
    const std::uint64_t excess = (UINT64_MAX % n + 1) % n;
    const std::uint64_t threshold = UINT64_MAX - excess;
    for (;;) {
        const std::uint64_t v = eng();
        if (v <= threshold) return v % n;
    }
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Engine& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(eng);
}

/// Standard normal via Box-Muller (one variate per call).
inline double standard_normal(Engine& eng) {
    double u1 = uniform01(eng);
    while (u1 <= 0.0) u1 = uniform01(eng);
    const double u2 = uniform01(eng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Geometric on {1, 2, ...} with the given mean (>= 1), by inversion.
inline std::uint64_t geometric_run(Engine& eng, double mean) {
    if (mean <= 1.0) return 1;
    const double p = 1.0 / mean;
    double u = uniform01(eng);
    while (u <= 0.0) u = uniform01(eng);
    return 1 + static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-p)));
}

} // namespace vmac
