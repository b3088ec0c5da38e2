#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "jumplab/core/inverse_gaussian.hpp"
#include "jumplab/core/rng.hpp"

namespace jumplab {

/// Parameters of the refined BN-S log-price model
///   dX = (mu + beta sigma^2) dt + sigma dW + rho ((1-theta) dZ + theta dZb),
///   d(sigma^2) = -lambda sigma^2 dt + (1-theta) dZ + theta dZb,
/// with both subordinators running on the lambda-scaled clock. theta in [0,1]
/// is the deterministic mixing weight between the small-jump subordinator Z
/// and the large-jump subordinator Zb; theta = 0 recovers the classical
/// model.
struct BnsParams {
    double mu = 0.0;
    double beta = 0.0;
    double rho = 0.0;       ///< jump leverage, <= 0
    double lambda = 1.0;    ///< mean-reversion rate, > 0
    double theta = 0.0;     ///< mixing weight in [0, 1]
    double sigma0_sq = 1.0; ///< initial variance, > 0

    void validate() const {
        if (!(lambda > 0.0)) throw std::invalid_argument("BnsParams: lambda must be > 0");
        if (rho > 0.0) throw std::invalid_argument("BnsParams: rho must be <= 0");
        if (theta < 0.0 || theta > 1.0)
            throw std::invalid_argument("BnsParams: theta must lie in [0, 1]");
        if (!(sigma0_sq > 0.0)) throw std::invalid_argument("BnsParams: sigma0_sq must be > 0");
    }
};

/// Compound-Poisson subordinator with inverse-Gaussian jump marks; `rate` is
/// jumps per unit of the subordinator's own clock.
struct SubordinatorSpec {
    InverseGaussianParams params;
    double rate = 1.0;

    void validate() const {
        if (!(rate > 0.0)) throw std::invalid_argument("SubordinatorSpec: rate must be > 0");
        params.validate();
    }

    /// Expected drift per unit time: rate * mean mark.
    double intensity() const { return rate * params.mean; }

    /// Variance at unit time: rate * E[mark^2].
    double unit_variance() const { return rate * params.second_moment(); }

    /// Largest argument at which the mark moment generating function is
    /// finite: scale / (2 mean^2) for the inverse-Gaussian law.
    double mgf_bound() const { return params.scale / (2.0 * params.mean * params.mean); }
};

/// The large-jump subordinator must dominate the small-jump one in intensity;
/// model construction enforces the pair-level ordering.
inline void validate_subordinator_pair(const SubordinatorSpec& z, const SubordinatorSpec& zb) {
    z.validate();
    zb.validate();
    if (!(zb.intensity() > z.intensity()))
        throw std::invalid_argument(
            "subordinator ordering violated: the large-jump subordinator must have strictly "
            "greater intensity (rate * mean) than the small-jump one");
}

/// Uniform simulation grid over [t0, t1].
struct PathGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    std::size_t steps = 1000;

    void validate() const {
        if (!(t1 > t0)) throw std::invalid_argument("PathGrid: t1 must exceed t0");
        if (steps == 0) throw std::invalid_argument("PathGrid: steps must be >= 1");
    }
    double dt() const { return (t1 - t0) / static_cast<double>(steps); }
};

/// One realized jump: arrival time on the model clock and mark size.
struct Jump {
    double time = 0.0;
    double size = 0.0;
};

/// Jump arrivals of a subordinator on the model-time interval [t0, t1]: the
/// subordinator runs on the lambda-scaled clock, so arrivals form a Poisson
/// stream at rate lambda * spec.rate in model time.
inline std::vector<Jump> sample_jump_stream(const SubordinatorSpec& spec, double lambda,
                                            double t0, double t1, Rng& rng) {
    spec.validate();
    std::vector<Jump> jumps;
    const double rate = lambda * spec.rate;
    double t = t0 + rng.exponential(rate);
    while (t <= t1) {
        jumps.push_back({t, ig_draw(spec.params, rng)});
        t += rng.exponential(rate);
    }
    return jumps;
}

}  // namespace jumplab
