#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>

#include "jumplab/bns/dynamics.hpp"
#include "jumplab/bns/model.hpp"
#include "jumplab/core/quadrature.hpp"

namespace jumplab {

/// Thrown when a transform argument leaves the subordinator cumulant's domain.
class CumulantDomainError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Cumulant of a compound-Poisson subordinator with inverse-Gaussian marks at
/// unit clock speed: kappa(c) = rate * (MGF(c) - 1), where
/// MGF(c) = exp((scale/mean) * (1 - sqrt(1 - 2 mean^2 c / scale))). Defined for
/// Re(c) <= scale / (2 mean^2); the principal branch extends it off the real
/// axis.
inline std::complex<double> cumulant(const SubordinatorSpec& spec,
                                     std::complex<double> c) {
    const double mean = spec.params.mean;
    const double scale = spec.params.scale;
    if (c.real() > spec.mgf_bound() * (1.0 + 1e-12))
        throw CumulantDomainError("cumulant: argument exceeds the transform domain");
    const std::complex<double> root =
        std::sqrt(1.0 - 2.0 * mean * mean * c / scale);
    return spec.rate * (std::exp((scale / mean) * (1.0 - root)) - 1.0);
}

/// Cumulant of the effective subordinator (1-theta) Z + theta Zb.
inline std::complex<double> cumulant_effective(const BnsParams& p,
                                               const SubordinatorSpec& z,
                                               const SubordinatorSpec& zb,
                                               std::complex<double> c) {
    std::complex<double> out{0.0, 0.0};
    if (p.theta < 1.0) out += cumulant(z, (1.0 - p.theta) * c);
    if (p.theta > 0.0) out += cumulant(zb, p.theta * c);
    return out;
}

/// Largest real c with both scaled arguments inside their cumulant domains.
inline double theta_hat_effective(const BnsParams& p, const SubordinatorSpec& z,
                                  const SubordinatorSpec& zb) {
    double bound = std::numeric_limits<double>::infinity();
    if (p.theta < 1.0) bound = std::min(bound, z.mgf_bound() / (1.0 - p.theta));
    if (p.theta > 0.0) bound = std::min(bound, zb.mgf_bound() / p.theta);
    return bound;
}

/// Open interval of real transform arguments for which the log-price Laplace
/// transform over [t, T] is finite.
struct TransformStrip {
    double theta_minus = 0.0;
    double theta_plus = 0.0;

    bool contains(double x) const { return theta_minus < x && x < theta_plus; }
};

namespace detail {

/// Golden-section minimizer on [lo, hi] (negate f to maximize).
template <typename F>
double golden_min(F&& f, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int iter = 0; iter < 200 && (b - a) > 1e-12 * (1.0 + std::abs(a)); ++iter) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return f(0.5 * (a + b));
}

}  // namespace detail

/// Computes the strip (theta_minus, theta_plus). The quadratic
/// z (z + 2 beta) eps(s,T) / 2 + rho z must stay below theta_hat for every
/// s in [t, T); solving for z at fixed s gives the two roots
///   -beta - rho/eps -+ sqrt((beta + rho/eps)^2 + 2 theta_hat / eps),
/// and the strip is the sup of the lower roots and the inf of the upper ones.
/// Both envelopes are located on a coarse grid and sharpened by golden-section
/// refinement; s is clipped strictly below T where eps vanishes.
inline TransformStrip strip_bounds(const BnsParams& p, const SubordinatorSpec& z,
                                   const SubordinatorSpec& zb, double t, double T) {
    p.validate();
    if (!(t < T)) throw std::invalid_argument("strip_bounds: need t < T");
    const double theta_hat = theta_hat_effective(p, z, zb);

    auto roots_at = [&](double s) {
        const double e = epsilon(s, T, p.lambda);
        const double w = p.beta + p.rho / e;
        const double disc = std::sqrt(w * w + 2.0 * theta_hat / e);
        return std::pair<double, double>{-w - disc, -w + disc};
    };

    const std::size_t grid_n = 1024;
    const double s_hi = T - (T - t) * 1e-9;
    double best_lo = -std::numeric_limits<double>::infinity();
    double best_hi = std::numeric_limits<double>::infinity();
    double arg_lo = t, arg_hi = t;
    for (std::size_t i = 0; i <= grid_n; ++i) {
        const double s = t + (s_hi - t) * static_cast<double>(i) / grid_n;
        const auto [lo, hi] = roots_at(s);
        if (lo > best_lo) {
            best_lo = lo;
            arg_lo = s;
        }
        if (hi < best_hi) {
            best_hi = hi;
            arg_hi = s;
        }
    }
    const double cell = (s_hi - t) / grid_n;
    const double lo_refined = -detail::golden_min(
        [&](double s) { return -roots_at(s).first; },
        std::max(t, arg_lo - cell), std::min(s_hi, arg_lo + cell));
    const double hi_refined = detail::golden_min(
        [&](double s) { return roots_at(s).second; },
        std::max(t, arg_hi - cell), std::min(s_hi, arg_hi + cell));
    return TransformStrip{std::max(best_lo, lo_refined), std::min(best_hi, hi_refined)};
}

/// Conditional state at the evaluation time t.
struct TransformState {
    double x_t = 0.0;
    double sigma_t_sq = 0.0;
};

/// Conditional Laplace transform of the log price at horizon T:
///
///   phi(z) = exp(z (X_t + mu (T-t)) + (z^2 + 2 beta z)/2 eps(t,T) sigma_t^2
///                + lambda int_t^T kappa_e(rho z + (z^2 + 2 beta z)/2 eps(s,T)) ds).
///
/// Complex z is admitted when the real part of the cumulant argument stays
/// in-domain along the whole integration range; real z inside strip_bounds is
/// always safe.
inline std::complex<double> laplace_transform(const BnsParams& p,
                                              const SubordinatorSpec& z_spec,
                                              const SubordinatorSpec& zb_spec,
                                              const TransformState& state, double t,
                                              double T, std::complex<double> z) {
    p.validate();
    if (!(t < T)) throw std::invalid_argument("laplace_transform: need t < T");
    if (state.sigma_t_sq < 0.0)
        throw std::invalid_argument("laplace_transform: negative variance state");

    const std::complex<double> quad = 0.5 * (z * z + 2.0 * p.beta * z);
    auto integrand_arg = [&](double s) {
        return p.rho * z + quad * epsilon(s, T, p.lambda);
    };
    auto g_at = [&](double s) {
        return cumulant_effective(p, z_spec, zb_spec, integrand_arg(s));
    };

    QuadratureSpec quad_spec;
    quad_spec.abs_tol = 1e-10;
    const double g_re = integrate_interval([&](double s) { return g_at(s).real(); },
                                           t, T, quad_spec);
    const double g_im = integrate_interval([&](double s) { return g_at(s).imag(); },
                                           t, T, quad_spec);

    const std::complex<double> exponent =
        z * (state.x_t + p.mu * (T - t)) +
        quad * epsilon(t, T, p.lambda) * state.sigma_t_sq +
        p.lambda * std::complex<double>{g_re, g_im};
    return std::exp(exponent);
}

}  // namespace jumplab
