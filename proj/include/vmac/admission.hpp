#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "vmac/error.hpp"
#include "vmac/rate.hpp"
#include "vmac/units.hpp"

namespace vmac {

struct LinkConfig {
    std::string link_id = "l";
    double capacity = 0.0; // bits/s
    /// Extension: fraction of capacity usable for admission. 1.0 admits up to
    /// the full link, which is the behaviour of both policies below.
    double target_utilization = 1.0;
};

inline void validate(const LinkConfig& link) {
    if (!(link.capacity > 0.0)) throw Error(Errc::InvalidArgument, "link capacity must be positive");
    if (!(link.target_utilization > 0.0)) throw Error(Errc::InvalidArgument, "target utilization must be positive");
}

enum class QualityClass { FullHD, HDReady, SD, HDWeb };

/// Requested peak rate per quality class, in bits/s.
constexpr double quality_class_rate(QualityClass c) noexcept {
    switch (c) {
    case QualityClass::FullHD: return 11.0 * kBitsPerMbps;
    case QualityClass::HDReady: return 8.0 * kBitsPerMbps;
    case QualityClass::SD: return 2.0 * kBitsPerMbps;
    case QualityClass::HDWeb: return 1.25 * kBitsPerMbps;
    }
    return 0.0;
}

inline std::optional<QualityClass> parse_quality_class(std::string_view s) {
    if (s == "fullhd") return QualityClass::FullHD;
    if (s == "hdready") return QualityClass::HDReady;
    if (s == "sd") return QualityClass::SD;
    if (s == "hdweb") return QualityClass::HDWeb;
    return std::nullopt;
}

struct AdmissionRequest {
    double requested_rate = 0.0; // bits/s

    static AdmissionRequest for_class(QualityClass c) noexcept { return {quality_class_rate(c)}; }
};

enum class Policy { Instantaneous, Average };

constexpr std::string_view to_string(Policy p) noexcept {
    return p == Policy::Instantaneous ? "instantaneous" : "average";
}

enum class Verdict { Admit, Reject };

constexpr std::string_view to_string(Verdict v) noexcept { return v == Verdict::Admit ? "admit" : "reject"; }

struct AdmissionDecision {
    Verdict verdict = Verdict::Reject;
    double measured_rate = 0.0; // bits/s
    double headroom = 0.0;      // capacity - (measured + requested); negative on reject
    Policy policy = Policy::Average;
};

/// Admit iff measured + requested <= usable capacity. No per-flow state is
/// consulted: the verdict depends only on these three numbers.
inline AdmissionDecision decide(Policy policy, double measured_rate, const AdmissionRequest& req,
                                const LinkConfig& link) {
    if (!(req.requested_rate > 0.0)) throw Error(Errc::InvalidArgument, "requested rate must be positive");
    validate(link);
    const double usable = link.capacity * link.target_utilization;
    AdmissionDecision d;
    d.policy = policy;
    d.measured_rate = measured_rate;
    d.headroom = usable - (measured_rate + req.requested_rate);
    d.verdict = measured_rate + req.requested_rate <= usable ? Verdict::Admit : Verdict::Reject;
    return d;
}

/// Admission on the instantaneous aggregate at the decision slot.
inline AdmissionDecision decide_instantaneous(const RateSample& sample, const AdmissionRequest& req,
                                              const LinkConfig& link) {
    return decide(Policy::Instantaneous, sample.instantaneous, req, link);
}

/// Admission on the windowed average aggregate.
inline AdmissionDecision decide_average(const RateSample& sample, const AdmissionRequest& req,
                                        const LinkConfig& link) {
    return decide(Policy::Average, sample.average, req, link);
}

inline AdmissionDecision decide(Policy policy, const RateSample& sample, const AdmissionRequest& req,
                                const LinkConfig& link) {
    return policy == Policy::Instantaneous ? decide_instantaneous(sample, req, link)
                                           : decide_average(sample, req, link);
}

} // namespace vmac
