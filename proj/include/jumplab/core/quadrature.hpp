#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace jumplab {

/// Tolerances and budget for adaptive quadrature.
struct QuadratureSpec {
    double abs_tol = 1e-8;
    double rel_tol = 1e-8;
    std::uint64_t max_subdivisions = 1ull << 20;
};

/// Thrown when the subdivision budget runs out; carries the partial estimate
/// so callers can decide whether it is still usable.
class QuadratureError : public std::runtime_error {
  public:
    QuadratureError(const std::string& what, double partial)
        : std::runtime_error(what), partial_estimate(partial) {}
    double partial_estimate;
};

namespace detail {

struct SimpsonState {
    std::uint64_t used = 0;
    std::uint64_t budget = 0;
};

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

// Classic adaptive Simpson: accept a panel when the two-half refinement moves
// the estimate by less than 15x the local tolerance, else recurse on halves.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               SimpsonState& st) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol || (b - a) < 1e-14) {
        return left + right + delta / 15.0;
    }
    if (++st.used > st.budget) {
        throw QuadratureError("quadrature failed to converge within the subdivision budget",
                              left + right);
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, st) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, st);
}

}  // namespace detail

/// Adaptive Simpson integral of f over the finite interval [a, b],
/// accurate to max(abs_tol, rel_tol * |result|).
inline double integrate_interval(const std::function<double(double)>& f, double a, double b,
                                 const QuadratureSpec& spec = {}) {
    if (!(b >= a)) throw std::invalid_argument("integrate_interval: b < a");
    if (a == b) return 0.0;
    detail::SimpsonState st{0, spec.max_subdivisions};
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = detail::simpson(a, b, fa, fm, fb);
    // Driving the refinement at abs_tol alone already satisfies the contract
    // error <= max(abs_tol, rel_tol * |result|): the relative term can only
    // loosen the target.
    return detail::adaptive_simpson(f, a, b, fa, fm, fb, whole, spec.abs_tol, st);
}

/// Integral of f over (0, inf) via the substitution x = t/(1-t), which maps
/// the half line onto (0,1); the Jacobian 1/(1-t)^2 is folded into the
/// integrand. Suited to the exponentially decaying densities used here.
inline double integrate_positive(const std::function<double(double)>& f,
                                 const QuadratureSpec& spec = {}) {
    auto transformed = [&f](double t) {
        if (t <= 0.0) return 0.0;
        const double om = 1.0 - t;
        if (om < 1e-12) return 0.0;  // integrand limit for decaying f
        const double x = t / om;
        return f(x) / (om * om);
    };
    return integrate_interval(transformed, 0.0, 1.0, spec);
}

}  // namespace jumplab
