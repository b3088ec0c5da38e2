#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace jumplab {

/// 64-bit seed for every stochastic operation in the library.
/// Contract: identical Seed + identical inputs => bit-identical outputs.
struct Seed {
    std::uint64_t value = 0;
};

/// Splittable pseudo-random generator built on the SplitMix64 update.
///
/// The generator is deliberately self-contained (no <random>) because the
/// standard library does not guarantee identical distribution output across
/// implementations, and the reproducibility contract here is bit-level.
/// Streams for parallel or per-task work are obtained with derive(), which
/// hashes (base seed, stream id) into a fresh state; derived streams are
/// stable no matter how many values the parent has produced.
class Rng {
  public:
    explicit Rng(Seed seed) : state_(seed.value) {}

    /// Next raw 64-bit value (SplitMix64 step).
    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Independent child generator for stream `id`, derived from the seed
    /// this generator was constructed with (not from its current state).
    Rng derive(std::uint64_t id) const {
        return Rng(Seed{mix(base_ ^ mix(id + 0x9e3779b97f4a7c15ull))});
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log() argument.
    double uniform01_pos() { return 1.0 - uniform01(); }

    /// Standard normal via Box-Muller. No caching of the second variate, so
    /// the draw count per call is fixed and stream replay is call-exact.
    double normal() {
        const double u = uniform01_pos();
        const double v = uniform01();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
    }

    /// Exponential with the given rate (mean 1/rate).
    double exponential(double rate) { return -std::log(uniform01_pos()) / rate; }

    /// Poisson count. Knuth's product method for small means; larger means are
    /// split by the additivity Poisson(m) = Poisson(m/2) + Poisson(m/2), which
    /// keeps the method exact without any large-mean approximation.
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean > 30.0) return poisson(mean / 2.0) + poisson(mean / 2.0);
        const double limit = std::exp(-mean);
        std::uint64_t k = 0;
        double prod = uniform01();
        while (prod > limit) {
            ++k;
            prod *= uniform01();
        }
        return k;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    std::uint64_t base_ = state_;
};

}  // namespace jumplab
