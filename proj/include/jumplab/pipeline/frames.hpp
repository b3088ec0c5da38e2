#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "jumplab/core/parallel.hpp"
#include "jumplab/pipeline/series.hpp"
#include "jumplab/seqtest/detect.hpp"

namespace jumplab {

/// What a frame's feature columns hold.
enum class FeatureKind { percent_changes, right_exit_frequencies };

struct FrameRow {
    std::vector<double> features;
    int target = 0;
    std::ptrdiff_t start_index = 0;
};

/// Stagger-by-one feature matrix: row i+1's features overlap row i's in all
/// but one position.
struct WindowFrame {
    std::vector<FrameRow> rows;
    FeatureKind feature_kind = FeatureKind::percent_changes;
    std::size_t n = 0;
};

/// Deterministic per-window seed: every window start index owns one stream
/// derived from the global seed, so any target can be reproduced by an
/// isolated detect call on that window alone.
inline Seed window_seed(Seed global, std::ptrdiff_t window_start) {
    Rng base{global};
    return Seed{base.derive(static_cast<std::uint64_t>(window_start)).next_u64()};
}

/// Frame builder of the percent-change pathway: features for the row starting
/// at index i are the n percent changes over days [i, i+n); the target labels
/// the next disjoint window [i+n, i+2n) by a full detector run.
inline WindowFrame build_percent_frame(const PriceSeries& series, std::size_t n,
                                       const InverseGaussianParams& training_nu,
                                       const DetectorConfig& cfg, Seed global_seed) {
    if (n < 2) throw std::invalid_argument("build_percent_frame: need n >= 2");
    if (series.size() < 2 * n + 1)
        throw std::invalid_argument("build_percent_frame: need at least 2n + 1 prices, got " +
                                    std::to_string(series.size()));

    const std::vector<double> pct = percent_changes(series.closes);
    const std::size_t n_rows = series.size() - 2 * n;
    WindowFrame frame;
    frame.feature_kind = FeatureKind::percent_changes;
    frame.n = n;
    frame.rows.resize(n_rows);
    parallel_for(n_rows, [&](std::size_t i) {
        FrameRow& row = frame.rows[i];
        row.start_index = static_cast<std::ptrdiff_t>(i);
        row.features.assign(pct.begin() + static_cast<std::ptrdiff_t>(i),
                            pct.begin() + static_cast<std::ptrdiff_t>(i + n));
        const std::size_t target_start = i + n;
        const std::vector<double> window(
            series.closes.begin() + static_cast<std::ptrdiff_t>(target_start),
            series.closes.begin() + static_cast<std::ptrdiff_t>(target_start + n + 1));
        const DetectionRecord rec =
            detect(window, training_nu, cfg,
                   window_seed(global_seed, static_cast<std::ptrdiff_t>(target_start)),
                   static_cast<std::ptrdiff_t>(target_start));
        row.target = rec.label;
    });
    return frame;
}

/// Right-exit frequency of the detector on the n-day window starting at j;
/// the building block of the frequency-feature pathway.
inline std::vector<double> exit_frequency_column(const PriceSeries& series,
                                                 std::size_t n,
                                                 const InverseGaussianParams& training_nu,
                                                 const DetectorConfig& cfg,
                                                 Seed global_seed) {
    if (series.size() < n + 1)
        throw std::invalid_argument("exit_frequency_column: need at least n + 1 prices");
    const std::size_t n_windows = series.size() - n;
    std::vector<double> freq(n_windows);
    parallel_for(n_windows, [&](std::size_t j) {
        const std::vector<double> window(
            series.closes.begin() + static_cast<std::ptrdiff_t>(j),
            series.closes.begin() + static_cast<std::ptrdiff_t>(j + n + 1));
        const DetectionRecord rec =
            detect(window, training_nu, cfg,
                   window_seed(global_seed, static_cast<std::ptrdiff_t>(j)),
                   static_cast<std::ptrdiff_t>(j));
        freq[j] = static_cast<double>(rec.right_exits);
    });
    return freq;
}

/// Frame builder of the frequency pathway: compute the exit-frequency column
/// b_j over every n-day window, take n consecutive frequencies as features,
/// and label each row by thresholding the frequency of the next disjoint
/// n-day period at p_star.
inline WindowFrame build_ref_frame(const PriceSeries& series, std::size_t n,
                                   const InverseGaussianParams& training_nu,
                                   const DetectorConfig& cfg, Seed global_seed) {
    if (n < 2) throw std::invalid_argument("build_ref_frame: need n >= 2");
    if (series.size() < 4 * n)
        throw std::invalid_argument("build_ref_frame: need at least 4n prices, got " +
                                    std::to_string(series.size()));

    const std::vector<double> freq =
        exit_frequency_column(series, n, training_nu, cfg, global_seed);
    // Row k consumes features freq[k .. k+n) and target freq[k + 3n - 2]; the
    // last usable k keeps that target index inside the column.
    const std::size_t n_rows = freq.size() - (3 * n - 2);
    WindowFrame frame;
    frame.feature_kind = FeatureKind::right_exit_frequencies;
    frame.n = n;
    frame.rows.resize(n_rows);
    for (std::size_t k = 0; k < n_rows; ++k) {
        FrameRow& row = frame.rows[k];
        row.start_index = static_cast<std::ptrdiff_t>(k);
        row.features.assign(freq.begin() + static_cast<std::ptrdiff_t>(k),
                            freq.begin() + static_cast<std::ptrdiff_t>(k + n));
        row.target =
            freq[k + 3 * n - 2] >= static_cast<double>(cfg.p_star) ? 1 : 0;
    }
    return frame;
}

/// Train/test index ranges, inclusive on both ends, matched on row start
/// indices.
struct SplitSpec {
    std::ptrdiff_t train_lo = 0;
    std::ptrdiff_t train_hi = 0;
    std::ptrdiff_t test_lo = 0;
    std::ptrdiff_t test_hi = 0;

    void validate() const {
        if (train_lo > train_hi || test_lo > test_hi)
            throw std::invalid_argument("split: empty range");
        const bool disjoint = train_hi < test_lo || test_hi < train_lo;
        if (!disjoint) throw std::invalid_argument("split: ranges overlap");
    }
};

struct FrameSplit {
    WindowFrame train;
    WindowFrame test;
};

inline FrameSplit split(const WindowFrame& frame, const SplitSpec& spec) {
    spec.validate();
    FrameSplit out;
    out.train.feature_kind = out.test.feature_kind = frame.feature_kind;
    out.train.n = out.test.n = frame.n;
    for (const FrameRow& row : frame.rows) {
        if (spec.train_lo <= row.start_index && row.start_index <= spec.train_hi)
            out.train.rows.push_back(row);
        else if (spec.test_lo <= row.start_index && row.start_index <= spec.test_hi)
            out.test.rows.push_back(row);
    }
    return out;
}

}  // namespace jumplab
