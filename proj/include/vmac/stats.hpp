#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include <boost/math/distributions/students_t.hpp>

#include "vmac/error.hpp"
#include "vmac/rate.hpp"

namespace vmac {

struct SeriesSummary {
    double mean = 0.0;
    double sample_std = 0.0;
    double peak = 0.0;
    std::size_t count = 0;
};

namespace detail {

inline bool all_equal(std::span<const double> xs) noexcept {
    return std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); });
}

// Mean shifted by the first element: a constant series returns that constant
// exactly instead of whatever n repeated additions round to.
inline double shifted_mean(std::span<const double> xs) noexcept {
    const double x0 = xs.front();
    double acc = 0.0;
    for (double x : xs) acc += x - x0;
    return x0 + acc / static_cast<double>(xs.size());
}

} // namespace detail

inline SeriesSummary summarize(std::span<const double> series) {
    if (series.empty()) throw Error(Errc::TooShort, "empty series");
    SeriesSummary s;
    s.count = series.size();
    s.peak = *std::max_element(series.begin(), series.end());
    s.mean = detail::shifted_mean(series);
    if (series.size() >= 2 && !detail::all_equal(series)) {
        double ss = 0.0;
        for (double x : series) ss += (x - s.mean) * (x - s.mean);
        s.sample_std = std::sqrt(ss / static_cast<double>(series.size() - 1));
    }
    return s;
}

/// max / mean; 1 for a constant series.
inline double peak_to_mean(std::span<const double> series) {
    const auto s = summarize(series);
    if (!(s.mean > 0.0)) throw Error(Errc::ZeroMean, "peak-to-mean ratio needs a positive mean");
    return s.peak / s.mean;
}

/// Sample (n-1) standard deviation over the mean.
inline double coefficient_of_variation(std::span<const double> series) {
    if (series.size() < 2) throw Error(Errc::TooShort, "coefficient of variation needs at least two values");
    const auto s = summarize(series);
    if (!(s.mean > 0.0)) throw Error(Errc::ZeroMean, "coefficient of variation needs a positive mean");
    return s.sample_std / s.mean;
}

/// Fraction of samples whose windowed average is strictly below the
/// instantaneous rate. Ties count as not-below.
inline double empirical_probability_avg_below_inst(std::span<const RateSample> samples) {
    if (samples.empty()) throw Error(Errc::TooShort, "no rate samples");
    std::size_t below = 0;
    for (const auto& s : samples) below += s.average < s.instantaneous ? 1 : 0;
    return static_cast<double>(below) / static_cast<double>(samples.size());
}

struct MeanWithCI {
    double mean = 0.0;
    double ci_half_width = 0.0;
    double confidence = 0.95;
    std::size_t reps = 0;
};

/// Two-sided Student-t quantile t_{(1+c)/2, dof}, from Boost.Math.
inline double student_t_two_sided(double confidence, std::size_t dof) {
    if (!(confidence > 0.0 && confidence < 1.0)) throw Error(Errc::InvalidArgument, "confidence must be in (0,1)");
    if (dof == 0) throw Error(Errc::TooShort, "need at least one degree of freedom");
    const boost::math::students_t dist(static_cast<double>(dof));
    return boost::math::quantile(dist, (1.0 + confidence) / 2.0);
}

/// Mean of the repetition values with a Student-t confidence half-width.
inline MeanWithCI mean_and_ci(std::span<const double> rep_values, double confidence = 0.95) {
    if (rep_values.size() < 2) throw Error(Errc::TooShort, "confidence interval needs at least two repetitions");
    const auto t = student_t_two_sided(confidence, rep_values.size() - 1);
    const auto s = summarize(rep_values);
    MeanWithCI out;
    out.mean = s.mean;
    out.confidence = confidence;
    out.reps = rep_values.size();
    out.ci_half_width = s.sample_std == 0.0 ? 0.0 : t * s.sample_std / std::sqrt(static_cast<double>(s.count));
    return out;
}

} // namespace vmac
