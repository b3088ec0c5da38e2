#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "jumplab/pipeline/frames.hpp"

namespace jumplab {

class TrainingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct TreeConfig {
    std::size_t max_depth = 6;
    std::size_t min_samples_leaf = 1;

    void validate() const {
        if (max_depth < 1) throw std::invalid_argument("tree: need max_depth >= 1");
        if (min_samples_leaf < 1)
            throw std::invalid_argument("tree: need min_samples_leaf >= 1");
    }
};

/// Per-split candidate-feature provider; the forest plugs in feature
/// subsampling here. Null means "all features".
using FeatureSampler = std::function<std::vector<std::size_t>(std::size_t)>;

/// CART classification tree: Gini impurity, midpoint thresholds between
/// consecutive distinct feature values, splits chosen by strict gain
/// improvement with ties broken toward the lowest feature index and then the
/// lowest threshold. Split scores depend only on class counts per side, so
/// permuting training rows cannot change the fitted tree.
class TreeModel {
  public:
    static TreeModel train(const WindowFrame& frame, const TreeConfig& cfg = {}) {
        cfg.validate();
        if (frame.rows.empty()) throw std::invalid_argument("tree: empty frame");
        require_both_classes(frame.rows);
        std::vector<std::size_t> all(frame.rows.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        TreeModel m;
        m.n_features_ = frame.rows.front().features.size();
        m.build(frame.rows, std::move(all), 0, cfg, nullptr);
        return m;
    }

    /// Forest entry: train on a row subset (bootstrap indices, possibly with
    /// repeats) with an optional per-split feature sampler. Single-class
    /// subsets are legal here and collapse to a leaf.
    static TreeModel train_on_subset(const std::vector<FrameRow>& rows,
                                     std::vector<std::size_t> indices,
                                     const TreeConfig& cfg,
                                     const FeatureSampler& sampler) {
        cfg.validate();
        if (indices.empty()) throw std::invalid_argument("tree: empty row subset");
        TreeModel m;
        m.n_features_ = rows.front().features.size();
        m.build(rows, std::move(indices), 0, cfg, sampler);
        return m;
    }

    double predict_proba(const std::vector<double>& features) const {
        if (features.size() != n_features_)
            throw std::invalid_argument("tree: feature arity mismatch");
        std::size_t at = 0;
        while (!nodes_[at].leaf()) {
            at = features[nodes_[at].feature] <= nodes_[at].threshold
                     ? nodes_[at].left
                     : nodes_[at].right;
        }
        return nodes_[at].proba;
    }

    std::size_t node_count() const { return nodes_.size(); }

    static void require_both_classes(const std::vector<FrameRow>& rows) {
        bool saw0 = false, saw1 = false;
        for (const FrameRow& r : rows) (r.target == 0 ? saw0 : saw1) = true;
        if (!saw0 || !saw1)
            throw TrainingError("tree: training frame has a single class");
    }

  private:
    struct Node {
        std::size_t feature = 0;
        double threshold = 0.0;
        std::size_t left = 0, right = 0;
        double proba = -1.0;  ///< class-1 fraction; >= 0 marks a leaf

        bool leaf() const { return proba >= 0.0; }
    };

    struct SplitChoice {
        bool found = false;
        std::size_t feature = 0;
        double threshold = 0.0;
        double gain = 0.0;
    };

    static double gini(std::size_t c0, std::size_t c1) {
        const double n = static_cast<double>(c0 + c1);
        if (n == 0.0) return 0.0;
        const double p0 = static_cast<double>(c0) / n;
        const double p1 = static_cast<double>(c1) / n;
        return 1.0 - p0 * p0 - p1 * p1;
    }

    SplitChoice best_split(const std::vector<FrameRow>& rows,
                           const std::vector<std::size_t>& idx,
                           const std::vector<std::size_t>& features,
                           std::size_t min_leaf) const {
        std::size_t total1 = 0;
        for (std::size_t i : idx) total1 += static_cast<std::size_t>(rows[i].target);
        const std::size_t total = idx.size();
        const std::size_t total0 = total - total1;
        const double parent = gini(total0, total1);

        SplitChoice best;
        std::vector<std::pair<double, int>> column(total);
        for (std::size_t f : features) {
            for (std::size_t k = 0; k < total; ++k)
                column[k] = {rows[idx[k]].features[f], rows[idx[k]].target};
            std::sort(column.begin(), column.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            std::size_t left0 = 0, left1 = 0;
            for (std::size_t k = 0; k + 1 < total; ++k) {
                left1 += static_cast<std::size_t>(column[k].second);
                left0 = k + 1 - left1;
                if (column[k].first == column[k + 1].first) continue;
                const std::size_t nl = k + 1, nr = total - nl;
                if (nl < min_leaf || nr < min_leaf) continue;
                const double child =
                    (static_cast<double>(nl) * gini(left0, left1) +
                     static_cast<double>(nr) * gini(total0 - left0, total1 - left1)) /
                    static_cast<double>(total);
                const double gain = parent - child;
                if (gain > best.gain + 1e-12) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = 0.5 * (column[k].first + column[k + 1].first);
                    best.gain = gain;
                }
            }
        }
        return best;
    }

    std::size_t build(const std::vector<FrameRow>& rows, std::vector<std::size_t> idx,
                      std::size_t depth, const TreeConfig& cfg,
                      const FeatureSampler& sampler) {
        std::size_t ones = 0;
        for (std::size_t i : idx) ones += static_cast<std::size_t>(rows[i].target);
        const bool pure = ones == 0 || ones == idx.size();

        SplitChoice choice;
        if (!pure && depth < cfg.max_depth) {
            std::vector<std::size_t> features;
            if (sampler) {
                features = sampler(n_features_);
            } else {
                features.resize(n_features_);
                for (std::size_t f = 0; f < n_features_; ++f) features[f] = f;
            }
            choice = best_split(rows, idx, features, cfg.min_samples_leaf);
        }

        const std::size_t at = nodes_.size();
        nodes_.emplace_back();
        if (!choice.found) {
            nodes_[at].proba =
                static_cast<double>(ones) / static_cast<double>(idx.size());
            return at;
        }

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx)
            (rows[i].features[choice.feature] <= choice.threshold ? left_idx
                                                                  : right_idx)
                .push_back(i);
        idx.clear();
        idx.shrink_to_fit();
        nodes_[at].feature = choice.feature;
        nodes_[at].threshold = choice.threshold;
        const std::size_t l = build(rows, std::move(left_idx), depth + 1, cfg, sampler);
        const std::size_t r = build(rows, std::move(right_idx), depth + 1, cfg, sampler);
        nodes_[at].left = l;
        nodes_[at].right = r;
        return at;
    }

    std::vector<Node> nodes_;
    std::size_t n_features_ = 0;
};

}  // namespace jumplab
