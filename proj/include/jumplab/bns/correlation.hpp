#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>

#include "jumplab/bns/simulate.hpp"

namespace jumplab {

/// Realized cumulative variance: nu -> int_0^nu sigma_tau^2 dtau.
using IntegratedVariancePath = std::function<double(double)>;

/// The exact cumulative-variance functional of one realization, built from
/// the closed-form variance dynamics on the jump streams.
inline IntegratedVariancePath realized_variance_path(double sigma0_sq,
                                                     std::vector<Jump> z_jumps,
                                                     std::vector<Jump> zb_jumps,
                                                     const BnsParams& p) {
    return [sigma0_sq, z_jumps = std::move(z_jumps), zb_jumps = std::move(zb_jumps),
            p](double v) {
        return integrated_variance(sigma0_sq, z_jumps, zb_jumps, p, 0.0, v);
    };
}

/// Log-return correlation across times s < t, evaluated on one realization:
///
///   Corr(X_t, X_s) = (int_0^s sigma^2 + rho^2 (1-theta)^2 N_z(s)
///                                    + rho^2 theta^2 N_zb(s)) / sqrt(a(t) a(s)),
///   a(v) = int_0^v sigma^2 + v rho^2 lambda ((1-theta)^2 Var Z_1
///                                            + theta^2 Var Zb_1),
///
/// where N_z(s), N_zb(s) count the realized jump arrivals by time s, the
/// cumulative variance comes from the supplied realized path, and the Var
/// terms are the subordinators' unit-time variances (analytic for
/// compound-Poisson marks: rate * E[mark^2]). The numerator mixes realized
/// quantities with expectation-level denominators by construction, so the
/// value at t = s need not normalize to exactly 1; the Monte Carlo estimator
/// below is the distribution-level cross-check.
inline double correlation_formula(const BnsParams& p, const SubordinatorSpec& z,
                                  const SubordinatorSpec& zb, double s, double t,
                                  const std::vector<Jump>& z_jumps,
                                  const std::vector<Jump>& zb_jumps,
                                  const IntegratedVariancePath& variance_path) {
    p.validate();
    if (!(0.0 < s && s < t)) throw std::invalid_argument("correlation: need 0 < s < t");

    const double var_unit = (1.0 - p.theta) * (1.0 - p.theta) * z.unit_variance() +
                            p.theta * p.theta * zb.unit_variance();
    auto alpha = [&](double v) {
        return variance_path(v) + v * p.rho * p.rho * p.lambda * var_unit;
    };
    auto count_by = [](const std::vector<Jump>& jumps, double horizon) {
        double n = 0.0;
        for (const Jump& j : jumps)
            if (j.time <= horizon) n += 1.0;
        return n;
    };

    const double numerator =
        variance_path(s) +
        p.rho * p.rho *
            ((1.0 - p.theta) * (1.0 - p.theta) * count_by(z_jumps, s) +
             p.theta * p.theta * count_by(zb_jumps, s));
    return numerator / std::sqrt(alpha(t) * alpha(s));
}

/// Convenience overload: the variance path is the realization's own, from
/// the model's initial variance and the given jump streams.
inline double correlation_formula(const BnsParams& p, const SubordinatorSpec& z,
                                  const SubordinatorSpec& zb, double s, double t,
                                  const std::vector<Jump>& z_jumps,
                                  const std::vector<Jump>& zb_jumps) {
    return correlation_formula(
        p, z, zb, s, t, z_jumps, zb_jumps, [&](double v) {
            return integrated_variance(p.sigma0_sq, z_jumps, zb_jumps, p, 0.0, v);
        });
}

/// Sample Pearson correlation of (X_s, X_t) over simulated paths; the
/// distribution-level estimator the formula is compared against.
inline double correlation_mc(const BnsParams& p, const SubordinatorSpec& z,
                             const SubordinatorSpec& zb, double s, double t,
                             std::size_t n_paths, std::size_t steps, Seed seed) {
    if (!(0.0 < s && s < t)) throw std::invalid_argument("correlation_mc: need 0 < s < t");
    if (n_paths < 2) throw std::invalid_argument("correlation_mc: need >= 2 paths");

    PathGrid grid{0.0, t, steps};
    // Snap the sampling index for s onto the grid.
    const std::size_t is =
        static_cast<std::size_t>(std::llround(s / grid.dt()));
    Rng master{seed};
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n_paths; ++i) {
        Rng rng = master.derive(i);
        const BnsPath path = simulate_path(p, z, zb, grid, rng);
        const double xs = path.x[is];
        const double xt = path.x.back();
        sx += xs;
        sy += xt;
        sxx += xs * xs;
        syy += xt * xt;
        sxy += xs * xt;
    }
    const double n = static_cast<double>(n_paths);
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double vx = sxx / n - (sx / n) * (sx / n);
    const double vy = syy / n - (sy / n) * (sy / n);
    return cov / std::sqrt(vx * vy);
}

}  // namespace jumplab
