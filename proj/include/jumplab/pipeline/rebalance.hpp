#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "jumplab/core/rng.hpp"
#include "jumplab/pipeline/frames.hpp"

namespace jumplab {

class RebalanceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Thins the majority class by uniform random removal until its size is at
/// most ratio times the minority's (ratio 1 = parity). Minority rows are
/// never touched, surviving rows keep their original order, and the selection
/// is a pure function of the seed. Intended for training frames only; test
/// frames must be evaluated as-is.
inline WindowFrame rebalance(const WindowFrame& frame, double ratio, Seed seed) {
    if (!(ratio >= 1.0)) throw std::invalid_argument("rebalance: ratio must be >= 1");
    std::vector<std::size_t> zeros, ones;
    for (std::size_t i = 0; i < frame.rows.size(); ++i)
        (frame.rows[i].target == 0 ? zeros : ones).push_back(i);
    if (zeros.empty() || ones.empty())
        throw RebalanceError("rebalance: frame has a single class");

    const bool zeros_major = zeros.size() > ones.size();
    std::vector<std::size_t>& majority = zeros_major ? zeros : ones;
    const std::vector<std::size_t>& minority = zeros_major ? ones : zeros;
    const std::size_t keep = std::min(
        majority.size(),
        static_cast<std::size_t>(ratio * static_cast<double>(minority.size())));
    if (keep == majority.size()) return frame;

    // Fisher-Yates prefix: the first `keep` entries are a uniform sample.
    Rng rng{seed};
    for (std::size_t i = 0; i < keep; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(rng.uniform01() *
                                         static_cast<double>(majority.size() - i));
        std::swap(majority[i], majority[std::min(j, majority.size() - 1)]);
    }
    majority.resize(keep);

    std::vector<std::size_t> kept;
    kept.reserve(keep + minority.size());
    kept.insert(kept.end(), majority.begin(), majority.end());
    kept.insert(kept.end(), minority.begin(), minority.end());
    std::sort(kept.begin(), kept.end());

    WindowFrame out;
    out.feature_kind = frame.feature_kind;
    out.n = frame.n;
    out.rows.reserve(kept.size());
    for (std::size_t i : kept) out.rows.push_back(frame.rows[i]);
    return out;
}

}  // namespace jumplab
