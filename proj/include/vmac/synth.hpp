#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vmac/error.hpp"
#include "vmac/random.hpp"
#include "vmac/trace.hpp"

namespace vmac {

/// Parameters of the synthetic VBR frame-size model.
///
/// Each frame is `mean_frame_bytes * (1 + jitter * N(0,1))`, with every
/// `gop`-th frame scaled by `iframe_scale`. Two kinds of episodes replace
/// runs of frames:
///   - dips: the encoder falls to (1 - depth) of its working rate, depth drawn
///     from [dip_depth_lo, dip_depth_hi] (fades, cuts to static shots);
///   - spikes: the frame grows by a factor drawn from [spike_lo, spike_hi]
///     (scene changes).
/// Episode lengths are geometric with the given means, and episodes start at
/// the per-frame rates `dip_rate` / `spike_rate`.
struct VbrProfile {
    ContentClass content = ContentClass::Unknown;
    double mean_frame_bytes = 25'000.0;
    double jitter = 0.05;
    double dip_rate = 0.0;
    double dip_mean_len = 1.0;
    double dip_depth_lo = 0.5;
    double dip_depth_hi = 0.95;
    double spike_rate = 0.0;
    double spike_mean_len = 1.0;
    double spike_lo = 1.5;
    double spike_hi = 2.5;
    std::size_t gop = 12;
    double iframe_scale = 1.0;
};

/// Capped high-motion stream: sits near its working rate, with frequent short
/// dips. Per-slot rates are left-skewed.
inline VbrProfile sports_like_profile(double mean_mbps = 5.0, double fps = 25.0) {
    VbrProfile p;
    p.content = ContentClass::Sports;
    p.mean_frame_bytes = mean_mbps * 1e6 / (8.0 * fps);
    p.jitter = 0.05;
    p.dip_rate = 0.04 / 1.5;
    p.dip_mean_len = 1.5;
    return p;
}

/// Low-motion stream: small steady frames with occasional scene-change
/// spikes. Per-slot rates are right-skewed and the overall variance is low.
inline VbrProfile news_like_profile(double mean_mbps = 2.0, double fps = 25.0) {
    VbrProfile p;
    p.content = ContentClass::News;
    p.mean_frame_bytes = mean_mbps * 1e6 / (8.0 * fps);
    p.jitter = 0.03;
    p.spike_rate = 0.03;
    p.spike_mean_len = 1.0;
    p.spike_lo = 1.2;
    p.spike_hi = 1.6;
    return p;
}

inline VideoTrace synth_vbr_trace(std::string id, std::size_t length, double fps, const VbrProfile& profile,
                                  std::uint64_t seed) {
    if (length == 0) throw Error(Errc::InvalidArgument, "length must be positive");
    if (!(fps > 0.0)) throw Error(Errc::InvalidArgument, "fps must be positive");
    if (!(profile.mean_frame_bytes > 0.0) || profile.jitter < 0.0 || profile.gop == 0)
        throw Error(Errc::InvalidArgument, "invalid VBR profile");

    Engine eng(seed);
    std::vector<double> scale(length, 1.0);
    std::vector<FrameType> types(length, FrameType::P);

    for (std::size_t k = 0; k < length; ++k) {
        if (k % profile.gop == 0) {
            types[k] = FrameType::I;
            scale[k] = profile.iframe_scale;
        }
        scale[k] *= 1.0 + profile.jitter * standard_normal(eng);
    }

    // Episodes are laid down after the base sequence so the base draws do not
    // depend on the episode parameters.
    for (std::size_t k = 0; k < length;) {
        const double u = uniform01(eng);
        if (u < profile.dip_rate) {
            const auto len = std::min<std::uint64_t>(geometric_run(eng, profile.dip_mean_len), length - k);
            const double depth = uniform_real(eng, profile.dip_depth_lo, profile.dip_depth_hi);
            for (std::size_t j = 0; j < len; ++j)
                scale[k + j] = (1.0 - depth) * (1.0 + 0.02 * standard_normal(eng));
            k += len;
        } else if (u < profile.dip_rate + profile.spike_rate) {
            const auto len = std::min<std::uint64_t>(geometric_run(eng, profile.spike_mean_len), length - k);
            const double factor = uniform_real(eng, profile.spike_lo, profile.spike_hi);
            for (std::size_t j = 0; j < len; ++j) scale[k + j] *= factor;
            k += len;
        } else {
            ++k;
        }
    }

    std::vector<FrameRecord> frames(length);
    for (std::size_t k = 0; k < length; ++k) {
        const double bytes = std::max(0.0, std::round(profile.mean_frame_bytes * scale[k]));
        frames[k] = FrameRecord{k, types[k], static_cast<std::uint64_t>(bytes)};
    }
    return VideoTrace(std::move(id), std::move(frames), fps, profile.content);
}

inline VideoTrace synth_cbr_trace(std::string id, std::size_t length, double fps, std::uint64_t frame_bytes,
                                  ContentClass content = ContentClass::Unknown) {
    if (length == 0) throw Error(Errc::InvalidArgument, "length must be positive");
    std::vector<FrameRecord> frames(length);
    for (std::size_t k = 0; k < length; ++k) frames[k] = FrameRecord{k, FrameType::Unknown, frame_bytes};
    return VideoTrace(std::move(id), std::move(frames), fps, content);
}

} // namespace vmac
