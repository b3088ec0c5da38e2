#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "jumplab/seqtest/envelopes.hpp"

namespace jumplab {

/// Thrown when no right boundary satisfying the defining equations exists for
/// the given coefficients; the message carries the coefficients for diagnosis.
class BoundarySolveError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Result of solving for the right boundary: the envelope-specific solutions
/// and their average, which the detector uses as r.
struct BoundarySolution {
    double r_f = 0.0;        ///< closed-form inversion of f(0) = 1 - alpha0
    double r_g = 0.0;        ///< bisection root of g(0) = 1 - alpha0
    double r = 0.0;          ///< (r_f + r_g) / 2
    bool g_root_found = false;  ///< false when the g equation has no root
};

namespace detail {

inline double g_at_origin(double r, double l, const GeneratorCoefficients& c) {
    DecisionRule rule{l, r, 0.5};  // alpha0 irrelevant for evaluating g
    return sub_solution_g(0.0, rule, c);
}

}  // namespace detail

/// Solves f(0) = 1 - alpha0 and g(0) = 1 - alpha0 for the right boundary and
/// averages the two solutions.
///
/// f inverts in closed form: e^{2 B r_f} = (1 - (1-alpha0) e^{2Bl}) / alpha0.
/// g is monotone increasing in r at the origin with supremum
/// e^{B(0-l) - q(0-l)} as r -> inf (q as in sub_solution_g), so a root exists
/// only when that supremum exceeds 1 - alpha0. For most small-tilt
/// coefficient sets it does not; `require_g_root` selects between the strict
/// error contract and the documented fallback r_g := r_f used by the detector.
inline BoundarySolution solve_right_boundary(double alpha0, double l,
                                             const GeneratorCoefficients& c,
                                             bool require_g_root = true) {
    if (!(alpha0 > 0.0 && alpha0 < 1.0))
        throw std::invalid_argument("solve_right_boundary: alpha0 must lie in (0,1)");
    if (!(l < 0.0)) throw std::invalid_argument("solve_right_boundary: l must be negative");

    BoundarySolution sol;
    const double B = c.B;
    const double target = 1.0 - alpha0;

    if (std::abs(B) < 1e-12) {
        // Linear-profile limit of f: (r - 0)/(r - l) = 1 - alpha0.
        sol.r_f = -l * target / alpha0;
    } else {
        const double rhs = (1.0 - target * std::exp(2.0 * B * l)) / alpha0;
        if (!(rhs > 1.0) || B < 0.0) {
            throw BoundarySolveError(
                "solve_right_boundary: f(0) = 1 - alpha0 has no positive solution "
                "(B = " + std::to_string(B) + ", C = " + std::to_string(c.C) +
                ", gamma = " + std::to_string(c.gamma) + ", beta = " + std::to_string(c.beta) +
                ")");
        }
        sol.r_f = std::log(rhs) / (2.0 * B);
    }

    // Root of g(0; r) = 1 - alpha0. g(0; r) increases from 0 (r -> 0+) toward
    // e^{(B - q)(-l)}; bracket-grow then bisect when the target is reachable.
    const double q = std::sqrt(2.0 * c.M + B * B) / std::abs(c.beta);
    const double g_sup = std::exp((B - q) * (0.0 - l));
    bool reachable = g_sup > target;
    double hi = std::max(1.0, 2.0 * sol.r_f);
    if (reachable) {
        // The approach to the supremum is asymptotic; give up if the bracket
        // outgrows any sane boundary, treating the root as unreachable.
        while (reachable && detail::g_at_origin(hi, l, c) < target) {
            hi *= 2.0;
            if (hi > 1e12) reachable = false;
        }
    }
    if (reachable) {
        double lo = 1e-12;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (detail::g_at_origin(mid, l, c) < target ? lo : hi) = mid;
        }
        sol.r_g = 0.5 * (lo + hi);
        sol.g_root_found = true;
    } else if (require_g_root) {
        throw BoundarySolveError(
            "solve_right_boundary: g(0) = 1 - alpha0 has no positive root in any bracket "
            "(supremum " + std::to_string(g_sup) + " <= " + std::to_string(target) +
            "; B = " + std::to_string(B) + ", M = " + std::to_string(c.M) +
            ", beta = " + std::to_string(c.beta) + ")");
    } else {
        sol.r_g = sol.r_f;  // documented fallback: g is uninformative here
    }

    sol.r = 0.5 * (sol.r_f + sol.r_g);
    if (!(sol.r > 0.0))
        throw BoundarySolveError("solve_right_boundary: solved boundary is not positive");
    return sol;
}

}  // namespace jumplab
