#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "jumplab/seqtest/boundary.hpp"
#include "jumplab/seqtest/simulate.hpp"
#include "jumplab/seqtest/tilt.hpp"

namespace jumplab {

/// Everything detect decides about one price window, in the shape of the
/// emitted JSON record. Optional fields stay empty on the degenerate paths
/// that never construct the corresponding object.
struct DetectionRecord {
    std::ptrdiff_t period_start_index = 0;
    double a_hat = 0.0;
    double sigma = 0.0;
    std::optional<GeneratorCoefficients> coeffs;   // beta, gamma, C, M, B
    std::optional<BoundarySolution> boundary;      // r_f, r_g, r
    std::size_t right_exits = 0;
    std::size_t left_exits = 0;
    std::size_t no_exits = 0;
    int label = 0;

    bool tilt_capped = false;      ///< a_hat hit the estimator pole / cap
    bool boundary_failed = false;  ///< no decision interval existed
    bool g_fallback = false;       ///< r_g fell back to r_f (no g root)
};

/// Detector configuration; every ambiguity the underlying method leaves open
/// is pinned here and echoed into reported artifacts.
struct DetectorConfig {
    double alpha0 = 0.1;
    std::size_t p_star = 8;
    std::size_t n_sims = 10;
    double l = -1.0;
    double a_max = 50.0;
    SimControls sim;
    GammaVariant gamma_variant = GammaVariant::log1p_squared;
};

/// Percent daily changes of a price window: 100 * (P[i+1] - P[i]) / P[i].
inline std::vector<double> percent_changes(const std::vector<double>& prices) {
    if (prices.size() < 2)
        throw std::invalid_argument("percent_changes: need at least 2 prices");
    std::vector<double> out;
    out.reserve(prices.size() - 1);
    for (std::size_t i = 0; i + 1 < prices.size(); ++i) {
        if (!(prices[i] > 0.0))
            throw std::invalid_argument("percent_changes: prices must be positive");
        out.push_back(100.0 * (prices[i + 1] - prices[i]) / prices[i]);
    }
    return out;
}

/// Sample standard deviation (n - 1 denominator).
inline double sample_stdev(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample_stdev: need >= 2 values");
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// Jump-size detection for one price window against a training-fitted base
/// density. Steps: extract negative percent changes as the period's jumps;
/// fit the tilt; take sigma as the stdev of all percent changes; build the
/// generator coefficients; solve the decision interval with l fixed; simulate
/// the log-likelihood paths; label 1 iff the right-exit count reaches p_star.
///
/// Degenerate paths, all recorded on the result:
///  - no negative changes, or the tilt fit clamps to 0: the null is not
///    rejectable, so no simulation runs and the label is 0;
///  - the boundary solve finds no decision interval (possible at extreme
///    capped tilts where C + gamma <= 0): the fitted alternative is treated
///    as overwhelming — right_exits := n_sims, label 1;
///  - the g-envelope equation has no root (common at small tilts): r_g falls
///    back to r_f and the run continues.
inline DetectionRecord detect(const std::vector<double>& window_prices,
                              const InverseGaussianParams& training_nu,
                              const DetectorConfig& cfg, Seed seed,
                              std::ptrdiff_t period_start_index = 0) {
    if (cfg.p_star == 0 || cfg.p_star > cfg.n_sims)
        throw std::invalid_argument("detect: need 1 <= p_star <= n_sims");

    DetectionRecord rec;
    rec.period_start_index = period_start_index;

    const std::vector<double> pct = percent_changes(window_prices);
    rec.sigma = sample_stdev(pct);

    std::vector<double> neg_jumps;
    for (double c : pct)
        if (c < 0.0) neg_jumps.push_back(-c);

    if (neg_jumps.empty()) {
        rec.no_exits = cfg.n_sims;
        return rec;  // a := 0, label := 0
    }

    const TiltFit tilt = fit_tilt_a(neg_jumps, training_nu, cfg.a_max);
    rec.a_hat = tilt.a;
    rec.tilt_capped = tilt.capped;
    if (tilt.a == 0.0) {
        rec.no_exits = cfg.n_sims;
        return rec;
    }

    const JumpHypothesis hyp{tilt.a, training_nu, rec.sigma};
    rec.coeffs = generator_coeffs(hyp, cfg.gamma_variant);

    BoundarySolution boundary;
    try {
        boundary = solve_right_boundary(cfg.alpha0, cfg.l, *rec.coeffs,
                                        /*require_g_root=*/false);
    } catch (const BoundarySolveError&) {
        rec.boundary_failed = true;
        rec.right_exits = cfg.n_sims;
        rec.label = 1;
        return rec;
    }
    rec.boundary = boundary;
    rec.g_fallback = !boundary.g_root_found;

    const DecisionRule rule{cfg.l, boundary.r, cfg.alpha0};
    const ExitResult exits =
        simulate_loglikelihood(*rec.coeffs, hyp, rule, cfg.n_sims, cfg.sim, seed);
    rec.right_exits = exits.exits_right;
    rec.left_exits = exits.exits_left;
    rec.no_exits = exits.no_exit;
    rec.label = exits.exits_right >= cfg.p_star ? 1 : 0;
    return rec;
}

/// Baseline classifier: 1 iff the period's mean negative-jump magnitude
/// exceeds the training mean.
inline int naive_classify(const std::vector<double>& period_jumps,
                          const std::vector<double>& training_jumps) {
    if (period_jumps.empty() || training_jumps.empty())
        throw std::invalid_argument("naive_classify: both jump lists must be nonempty");
    auto mean = [](const std::vector<double>& xs) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s / static_cast<double>(xs.size());
    };
    return mean(period_jumps) > mean(training_jumps) ? 1 : 0;
}

}  // namespace jumplab
