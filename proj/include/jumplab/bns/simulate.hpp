#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "jumplab/bns/dynamics.hpp"
#include "jumplab/bns/model.hpp"

namespace jumplab {

/// One simulated path sampled on the grid nodes, including both realized
/// jump streams so closed-form checks can share the realization.
struct BnsPath {
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> sigma_sq;
    std::vector<Jump> z_jumps;
    std::vector<Jump> zb_jumps;
};

/// Euler scheme for the refined model. Within each step the continuous parts
/// update first (drift + diffusion for X; multiplicative decay e^{-lambda h}
/// for the variance, which keeps it positive), then the step's subordinator
/// increments are added to both equations. Jumps enter X through the leverage
/// rho and the variance through the mixing weights.
inline BnsPath simulate_path(const BnsParams& p, const SubordinatorSpec& z,
                             const SubordinatorSpec& zb, const PathGrid& grid, Rng& rng) {
    p.validate();
    grid.validate();
    validate_subordinator_pair(z, zb);

    BnsPath path;
    path.z_jumps = sample_jump_stream(z, p.lambda, grid.t0, grid.t1, rng);
    path.zb_jumps = sample_jump_stream(zb, p.lambda, grid.t0, grid.t1, rng);

    const double h = grid.dt();
    const double sqrt_h = std::sqrt(h);
    const double decay = std::exp(-p.lambda * h);

    double x = 0.0;
    double var = p.sigma0_sq;
    path.t.reserve(grid.steps + 1);
    path.x.reserve(grid.steps + 1);
    path.sigma_sq.reserve(grid.steps + 1);
    path.t.push_back(grid.t0);
    path.x.push_back(x);
    path.sigma_sq.push_back(var);

    std::size_t zi = 0;
    std::size_t zbi = 0;
    for (std::size_t k = 1; k <= grid.steps; ++k) {
        const double t_end = grid.t0 + h * static_cast<double>(k);
        x += (p.mu + p.beta * var) * h + std::sqrt(var) * sqrt_h * rng.normal();
        var *= decay;
        double dz = 0.0;
        while (zi < path.z_jumps.size() && path.z_jumps[zi].time <= t_end)
            dz += path.z_jumps[zi++].size;
        double dzb = 0.0;
        while (zbi < path.zb_jumps.size() && path.zb_jumps[zbi].time <= t_end)
            dzb += path.zb_jumps[zbi++].size;
        const double mixed = (1.0 - p.theta) * dz + p.theta * dzb;
        x += p.rho * mixed;
        var += mixed;
        path.t.push_back(t_end);
        path.x.push_back(x);
        path.sigma_sq.push_back(var);
    }
    return path;
}

/// n_paths independent simulations with per-path derived seeds.
inline std::vector<BnsPath> simulate_paths(const BnsParams& p, const SubordinatorSpec& z,
                                           const SubordinatorSpec& zb, const PathGrid& grid,
                                           std::size_t n_paths, Seed seed) {
    if (n_paths == 0) throw std::invalid_argument("simulate_paths: n_paths must be >= 1");
    Rng master(seed);
    std::vector<BnsPath> out;
    out.reserve(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
        Rng rng = master.derive(i);
        out.push_back(simulate_path(p, z, zb, grid, rng));
    }
    return out;
}

}  // namespace jumplab
