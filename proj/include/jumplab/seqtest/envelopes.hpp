#pragma once

#include <cmath>
#include <stdexcept>

#include "jumplab/seqtest/coefficients.hpp"

namespace jumplab {

/// The decision interval [l, r] and the test level alpha0. A simulated
/// log-likelihood path accepts the small-jump hypothesis on exiting left of l
/// and the large-jump hypothesis on exiting right of r.
struct DecisionRule {
    double l = -1.0;
    double r = 1.0;
    double alpha0 = 0.1;

    void validate() const {
        if (!(l < 0.0) || !(r > 0.0))
            throw std::invalid_argument("DecisionRule: need l < 0 < r");
        if (!(alpha0 > 0.0 && alpha0 < 1.0))
            throw std::invalid_argument("DecisionRule: alpha0 must lie in (0,1)");
    }
};

/// Super-solution envelope f(x) = (e^{2Br} - e^{2Bx}) / (e^{2Br} - e^{2Bl});
/// the B -> 0 degenerate case is the linear profile (r - x)/(r - l).
/// Satisfies f(l) = 1, f(r) = 0.
inline double super_solution_f(double x, const DecisionRule& rule,
                               const GeneratorCoefficients& c) {
    rule.validate();
    if (x < rule.l || x > rule.r)
        throw std::invalid_argument("super_solution_f: x outside [l, r]");
    const double B = c.B;
    if (std::abs(B) < 1e-12) return (rule.r - x) / (rule.r - rule.l);
    // Factor e^{2Br} out of numerator and denominator to avoid overflow for
    // large B; expm1 keeps precision when the exponents are close.
    const double num = -std::expm1(2.0 * B * (x - rule.r));
    const double den = -std::expm1(2.0 * B * (rule.l - rule.r));
    return num / den;
}

/// Sub-solution envelope
/// g(x) = e^{B(x-l)} sinh((r-x) q) / sinh((r-l) q),  q = sqrt(2M + B^2)/|beta|.
/// Satisfies g(l) = 1, g(r) = 0. The diffusion enters through |beta|: the
/// formula depends on the diffusion magnitude only.
inline double sub_solution_g(double x, const DecisionRule& rule, const GeneratorCoefficients& c) {
    rule.validate();
    if (x < rule.l || x > rule.r)
        throw std::invalid_argument("sub_solution_g: x outside [l, r]");
    if (c.beta == 0.0)
        throw std::invalid_argument("sub_solution_g: beta = 0 is degenerate");
    const double q = std::sqrt(2.0 * c.M + c.B * c.B) / std::abs(c.beta);
    // sinh ratio in exponential form, overflow-safe for large arguments:
    // sinh(p)/sinh(w) = e^{p-w} (1 - e^{-2p}) / (1 - e^{-2w}).
    const double p = (rule.r - x) * q;
    const double w = (rule.r - rule.l) * q;
    const double ratio = std::exp(p - w) * (-std::expm1(-2.0 * p)) / (-std::expm1(-2.0 * w));
    return std::exp(c.B * (x - rule.l)) * ratio;
}

}  // namespace jumplab
