#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "jumplab/core/inverse_gaussian.hpp"
#include "jumplab/core/quadrature.hpp"

namespace jumplab {

/// The alternative hypothesis under test: the base jump density nu tilted by
/// (1 + a x), against the null a = 0, for an observed series with diffusion
/// scale sigma (the standard deviation of its daily percent changes).
struct JumpHypothesis {
    double a = 0.0;                ///< tilt; a = 0 recovers the null
    InverseGaussianParams nu;      ///< base jump density
    double sigma = 1.0;            ///< diffusion of the observed process

    void validate() const {
        if (a < 0.0) throw std::invalid_argument("JumpHypothesis: tilt a must be >= 0");
        if (!(sigma > 0.0)) throw std::invalid_argument("JumpHypothesis: sigma must be > 0");
        nu.validate();
    }
};

/// Drift/diffusion/jump constants of the log-likelihood-ratio process, plus
/// the derived envelope constant B = 2(C + gamma)/beta^2.
struct GeneratorCoefficients {
    double beta = 0.0;   ///< diffusion coefficient (negative by construction)
    double m = 0.0;      ///< tail mass term
    double gamma = 0.0;  ///< drift of the log-likelihood process
    double C = 0.0;      ///< bounded-jump functional of the jump measure
    double M = 0.0;      ///< total jump intensity; equals a exactly
    double B = 0.0;      ///< 2(C + gamma)/beta^2
};

/// Reading of the ambiguous quadratic term in gamma's integrand: the square
/// of log(1+x) (default) or the log of (1+x)^2.
enum class GammaVariant { log1p_squared, two_log1p };

/// Integral of h against the jump measure K of the log-likelihood process.
/// K is the pushforward of a*nu under y = log(1+x), so
/// int h dK = a * int h(log(1+x)) nu(dx).
inline double k_integral(const std::function<double(double)>& h, double a,
                         const InverseGaussianParams& nu, const QuadratureSpec& spec = {}) {
    nu.validate();
    if (a < 0.0) throw std::invalid_argument("k_integral: a must be >= 0");
    if (a == 0.0) return 0.0;
    return a * integrate_positive([&](double x) { return h(std::log1p(x)) * ig_pdf(x, nu); },
                                  spec);
}

/// All six constants of the log-likelihood generator by quadrature.
///
/// beta  = -a/sigma * int (1 ^ x) x nu(dx)
/// m     =  a * int_{x>1} x nu(dx)
/// gamma =  m - beta^2/2 + a * int_0^1 ((log(1+x))^2 - x) nu(dx)
/// C     =  int y/(1+|y|) K(dy),   M = int K(dy) = a,   B = 2(C+gamma)/beta^2
inline GeneratorCoefficients generator_coeffs(const JumpHypothesis& hyp,
                                              GammaVariant variant = GammaVariant::log1p_squared,
                                              const QuadratureSpec& spec = {}) {
    hyp.validate();
    if (hyp.a == 0.0)
        throw std::invalid_argument("generator_coeffs: a = 0 is the degenerate null, no test");

    const auto& nu = hyp.nu;
    GeneratorCoefficients c;
    c.beta = -hyp.a / hyp.sigma *
             integrate_positive(
                 [&](double x) { return std::min(1.0, x) * x * ig_pdf(x, nu); }, spec);
    // Tail integral over x > 1, expressed on (0, inf) via a shift.
    c.m = hyp.a * integrate_positive(
                      [&](double u) { return (1.0 + u) * ig_pdf(1.0 + u, nu); }, spec);
    const double small_jump_term =
        hyp.a * integrate_interval(
                    [&](double x) {
                        if (x <= 0.0) return 0.0;
                        const double y = std::log1p(x);
                        const double quad =
                            variant == GammaVariant::log1p_squared ? y * y : 2.0 * y;
                        return (quad - x) * ig_pdf(x, nu);
                    },
                    0.0, 1.0, spec);
    c.gamma = c.m - 0.5 * c.beta * c.beta + small_jump_term;
    c.C = k_integral([](double y) { return y / (1.0 + std::abs(y)); }, hyp.a, nu, spec);
    c.M = hyp.a;  // pushforward preserves the unit mass of the base density
    c.B = 2.0 * (c.C + c.gamma) / (c.beta * c.beta);
    return c;
}

}  // namespace jumplab
