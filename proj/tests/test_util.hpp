#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "vmac/random.hpp"
#include "vmac/trace.hpp"

namespace vmac_test {

using namespace vmac;

inline TracePtr trace_from_sizes(std::vector<std::uint64_t> sizes, double fps, std::string id = "t",
                                 ContentClass c = ContentClass::Unknown) {
    std::vector<FrameRecord> frames;
    for (std::size_t k = 0; k < sizes.size(); ++k) frames.push_back({k, FrameType::Unknown, sizes[k]});
    return std::make_shared<const VideoTrace>(std::move(id), std::move(frames), fps, c);
}

/// Trace whose slot k carries exactly rates_mbps[k] Mbps at 25 fps.
inline TracePtr trace_from_mbps(const std::vector<double>& rates_mbps, std::string id = "t") {
    std::vector<std::uint64_t> sizes;
    for (double r : rates_mbps) sizes.push_back(static_cast<std::uint64_t>(r * 1e6 / 200.0));
    return trace_from_sizes(std::move(sizes), 25.0, std::move(id));
}

inline TracePtr random_trace(Engine& eng, std::size_t max_len = 40, double fps = 25.0) {
    const std::size_t len = 1 + uniform_index(eng, max_len);
    std::vector<std::uint64_t> sizes(len);
    for (auto& s : sizes) s = uniform_index(eng, 100'000);
    return trace_from_sizes(std::move(sizes), fps);
}

} // namespace vmac_test
