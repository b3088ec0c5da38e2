#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

#include "jumplab/core/parallel.hpp"
#include "jumplab/core/rng.hpp"
#include "jumplab/ml/tree.hpp"

namespace jumplab {

struct ForestConfig {
    std::size_t n_trees = 100;
    bool bootstrap = true;
    bool subsample_features = true;  ///< sqrt(n) candidate features per split
    TreeConfig tree;

    void validate() const {
        if (n_trees < 1) throw std::invalid_argument("forest: need n_trees >= 1");
        tree.validate();
    }
};

/// Random forest over the CART trees: per-tree bootstrap resampling and
/// per-split sqrt(n) feature subsampling, each tree on its own derived
/// stream. With bootstrap and subsampling both disabled a 1-tree forest
/// consumes no randomness and reproduces the plain decision tree.
class ForestModel {
  public:
    static ForestModel train(const WindowFrame& frame, const ForestConfig& cfg,
                             Seed seed) {
        cfg.validate();
        if (frame.rows.empty()) throw std::invalid_argument("forest: empty frame");
        TreeModel::require_both_classes(frame.rows);

        const std::size_t n_rows = frame.rows.size();
        const std::size_t n_features = frame.rows.front().features.size();
        const std::size_t m = cfg.subsample_features
                                  ? std::max<std::size_t>(
                                        1, static_cast<std::size_t>(
                                               std::sqrt(static_cast<double>(n_features))))
                                  : n_features;

        ForestModel model;
        model.trees_.resize(cfg.n_trees);
        Rng master{seed};
        parallel_for(cfg.n_trees, [&](std::size_t i) {
            Rng rng = master.derive(i);
            std::vector<std::size_t> indices(n_rows);
            if (cfg.bootstrap) {
                for (std::size_t k = 0; k < n_rows; ++k)
                    indices[k] = std::min(
                        n_rows - 1, static_cast<std::size_t>(
                                        rng.uniform01() * static_cast<double>(n_rows)));
            } else {
                for (std::size_t k = 0; k < n_rows; ++k) indices[k] = k;
            }

            FeatureSampler sampler;
            if (m < n_features) {
                // Shared per-tree stream: the build's deterministic
                // left-then-right recursion keeps draws reproducible.
                auto tree_rng = std::make_shared<Rng>(rng.derive(~std::size_t{0}));
                sampler = [m, tree_rng](std::size_t nf) {
                    std::vector<std::size_t> pool(nf);
                    for (std::size_t f = 0; f < nf; ++f) pool[f] = f;
                    for (std::size_t k = 0; k < m; ++k) {
                        const std::size_t j =
                            k + std::min(nf - 1 - k,
                                         static_cast<std::size_t>(
                                             tree_rng->uniform01() *
                                             static_cast<double>(nf - k)));
                        std::swap(pool[k], pool[j]);
                    }
                    pool.resize(m);
                    std::sort(pool.begin(), pool.end());
                    return pool;
                };
            }
            model.trees_[i] = TreeModel::train_on_subset(frame.rows, std::move(indices),
                                                         cfg.tree, sampler);
        });
        return model;
    }

    /// Ensemble probability: plain mean of the tree probabilities.
    double predict_proba(const std::vector<double>& features) const {
        double sum = 0.0;
        for (const TreeModel& t : trees_) sum += t.predict_proba(features);
        return sum / static_cast<double>(trees_.size());
    }

    std::size_t tree_count() const { return trees_.size(); }

  private:
    std::vector<TreeModel> trees_;
};

}  // namespace jumplab
