#pragma once

#include <stdexcept>
#include <vector>

#include "jumplab/core/inverse_gaussian.hpp"

namespace jumplab {

/// Result of the tilt fit; `capped` marks windows whose sample mean reached
/// the estimator pole and were clamped to the configured maximum.
struct TiltFit {
    double a = 0.0;
    bool capped = false;
};

/// Moment-matching estimate of the tilt a from observed period jumps.
///
/// The tilted density (1 + a x) nu / (1 + a m1) has mean
/// (m1 + a m2) / (1 + a m1) with m1, m2 the base moments; solving that
/// against the sample mean gives a = (mean - m1) / (m2 - mean * m1).
/// The estimate is clamped at 0 from below (the null) and capped at a_max
/// when the sample mean reaches the pole m2/m1 or beyond.
inline TiltFit fit_tilt_a(const std::vector<double>& period_jumps,
                          const InverseGaussianParams& nu, double a_max = 50.0) {
    nu.validate();
    if (period_jumps.empty())
        throw std::invalid_argument("fit_tilt_a: need at least one jump in the period");
    if (!(a_max > 0.0)) throw std::invalid_argument("fit_tilt_a: a_max must be positive");

    double mean = 0.0;
    for (double x : period_jumps) {
        if (!(x > 0.0)) throw std::invalid_argument("fit_tilt_a: jumps must be positive");
        mean += x;
    }
    mean /= static_cast<double>(period_jumps.size());

    const double m1 = nu.first_moment();
    const double m2 = nu.second_moment();
    if (mean >= m2 / m1) return {a_max, true};
    const double a = (mean - m1) / (m2 - mean * m1);
    if (a <= 0.0) return {0.0, false};
    if (a >= a_max) return {a_max, true};
    return {a, false};
}

}  // namespace jumplab
