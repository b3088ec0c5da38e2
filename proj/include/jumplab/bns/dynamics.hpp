#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "jumplab/bns/model.hpp"

namespace jumplab {

/// epsilon(s, T) = (1 - e^{-lambda (T - s)}) / lambda, the accumulated
/// mean-reversion weight over [s, T].
inline double epsilon(double s, double T, double lambda) {
    if (s > T) throw std::invalid_argument("epsilon: need s <= T");
    if (!(lambda > 0.0)) throw std::invalid_argument("epsilon: lambda must be > 0");
    return -std::expm1(-lambda * (T - s)) / lambda;
}

/// Variance at time t given the realized jump streams of both subordinators:
///   sigma_t^2 = e^{-lambda t} sigma_0^2
///             + sum_{jumps s_i <= t} e^{-lambda (t - s_i)} w_i J_i,
/// with weight (1 - theta) for small-jump arrivals and theta for large-jump
/// ones. Exact on the realization — the oracle the Euler scheme is checked
/// against.
inline double sigma_sq_closed_form(const std::vector<Jump>& z_jumps,
                                   const std::vector<Jump>& zb_jumps, const BnsParams& p,
                                   double t) {
    p.validate();
    if (t < 0.0) throw std::invalid_argument("sigma_sq_closed_form: t must be >= 0");
    double total = std::exp(-p.lambda * t) * p.sigma0_sq;
    for (const Jump& j : z_jumps)
        if (j.time <= t) total += (1.0 - p.theta) * j.size * std::exp(-p.lambda * (t - j.time));
    for (const Jump& j : zb_jumps)
        if (j.time <= t) total += p.theta * j.size * std::exp(-p.lambda * (t - j.time));
    return total;
}

/// Integrated variance over [t, T] on a realized jump stream:
///   sigma_I^2 = epsilon(t, T) sigma_t^2 + sum_{t < s_i <= T} epsilon(s_i, T) w_i J_i.
inline double integrated_variance(double sigma_t_sq, const std::vector<Jump>& z_jumps,
                                  const std::vector<Jump>& zb_jumps, const BnsParams& p,
                                  double t, double T) {
    p.validate();
    if (t > T) throw std::invalid_argument("integrated_variance: need t <= T");
    double total = epsilon(t, T, p.lambda) * sigma_t_sq;
    for (const Jump& j : z_jumps)
        if (j.time > t && j.time <= T)
            total += (1.0 - p.theta) * j.size * epsilon(j.time, T, p.lambda);
    for (const Jump& j : zb_jumps)
        if (j.time > t && j.time <= T) total += p.theta * j.size * epsilon(j.time, T, p.lambda);
    return total;
}

}  // namespace jumplab
