#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vmac/synth.hpp"
#include "vmac/trace.hpp"

// Recipes for the trace sets shipped under data/traces. `vmac synth-library`
// writes them; tests rebuild them in memory and compare.
namespace vmac::library {

inline constexpr double kFps = 25.0;
inline constexpr std::size_t kLength = 4000;

struct Entry {
    std::string subdir;
    VideoTrace trace;
};

/// High-motion streams: capped rate with short dips.
inline std::vector<VideoTrace> bursty() {
    struct Spec { const char* id; double mbps; ContentClass c; std::uint64_t seed; };
    const Spec specs[] = {
        {"sports_a", 5.0, ContentClass::Sports, 101}, {"sports_b", 6.0, ContentClass::Sports, 102},
        {"sports_c", 4.0, ContentClass::Sports, 103}, {"movie_a", 4.5, ContentClass::Movie, 104},
        {"movie_b", 5.5, ContentClass::Movie, 105},   {"demo_a", 5.0, ContentClass::Demo, 106},
    };
    std::vector<VideoTrace> out;
    for (const auto& s : specs) {
        auto p = sports_like_profile(s.mbps, kFps);
        p.content = s.c;
        out.push_back(synth_vbr_trace(s.id, kLength, kFps, p, s.seed));
    }
    return out;
}

/// Three low-variance news-like and three high-variance sports-like streams.
inline std::vector<VideoTrace> content() {
    std::vector<VideoTrace> out;
    const double news_mbps[] = {1.5, 2.0, 2.5};
    const double sports_mbps[] = {4.0, 5.0, 6.0};
    for (int i = 0; i < 3; ++i)
        out.push_back(synth_vbr_trace("news_" + std::string(1, char('a' + i)), kLength, kFps,
                                      news_like_profile(news_mbps[i], kFps), 201 + i));
    for (int i = 0; i < 3; ++i)
        out.push_back(synth_vbr_trace("sports_" + std::string(1, char('a' + i)), kLength, kFps,
                                      sports_like_profile(sports_mbps[i], kFps), 301 + i));
    return out;
}

/// A single 9 Mbps constant-rate stream.
inline std::vector<VideoTrace> cbr() {
    return {synth_cbr_trace("cbr_9mbps", 1000, kFps, 45'000)};
}

inline std::vector<Entry> all() {
    std::vector<Entry> out;
    for (auto& t : bursty()) out.push_back({"bursty", std::move(t)});
    for (auto& t : content()) out.push_back({"content", std::move(t)});
    for (auto& t : cbr()) out.push_back({"cbr", std::move(t)});
    return out;
}

inline void write_all(const std::filesystem::path& root) {
    for (const auto& e : all()) {
        std::filesystem::create_directories(root / e.subdir);
        write_trace_file(root / e.subdir / (e.trace.id() + ".trace"), e.trace);
    }
}

inline std::vector<TracePtr> as_library(std::vector<VideoTrace> traces) {
    std::vector<TracePtr> out;
    for (auto& t : traces) out.push_back(std::make_shared<const VideoTrace>(std::move(t)));
    return out;
}

} // namespace vmac::library
