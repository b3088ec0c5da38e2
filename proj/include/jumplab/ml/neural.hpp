#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "jumplab/core/rng.hpp"
#include "jumplab/ml/logistic.hpp"  // FeatureScaler, sigmoid
#include "jumplab/ml/tree.hpp"     // TrainingError, frame types

namespace jumplab {

/// One-hidden-layer feedforward net: n_in -> hidden (ReLU) -> 1 (sigmoid).
/// Parameters live in one flat vector laid out W1 | b1 | w2 | b2 so the loss
/// can be probed component-wise by finite differences.
struct NeuralShape {
    std::size_t n_in = 0;
    std::size_t hidden = 32;

    std::size_t param_count() const { return hidden * n_in + hidden + hidden + 1; }
    std::size_t w1_at(std::size_t unit, std::size_t in) const {
        return unit * n_in + in;
    }
    std::size_t b1_at(std::size_t unit) const { return hidden * n_in + unit; }
    std::size_t w2_at(std::size_t unit) const {
        return hidden * n_in + hidden + unit;
    }
    std::size_t b2_at() const { return hidden * n_in + hidden + hidden; }
};

/// Mean cross-entropy over the batch plus its full analytic gradient. The
/// loss uses the softplus form log(1+e^-|z|) + max(z,0) - y z, whose gradient
/// in the output pre-activation is exactly sigmoid(z) - y.
inline double neural_loss_and_grad(const NeuralShape& shape,
                                   const std::vector<double>& params,
                                   const std::vector<std::vector<double>>& features,
                                   const std::vector<int>& targets,
                                   std::vector<double>& grad) {
    if (params.size() != shape.param_count())
        throw std::invalid_argument("neural: parameter vector has wrong length");
    if (features.empty() || features.size() != targets.size())
        throw std::invalid_argument("neural: batch shape mismatch");

    grad.assign(params.size(), 0.0);
    const double inv_n = 1.0 / static_cast<double>(features.size());
    double loss = 0.0;
    std::vector<double> act(shape.hidden);

    for (std::size_t i = 0; i < features.size(); ++i) {
        const std::vector<double>& x = features[i];
        if (x.size() != shape.n_in)
            throw std::invalid_argument("neural: feature arity mismatch");
        double z2 = params[shape.b2_at()];
        for (std::size_t k = 0; k < shape.hidden; ++k) {
            double z1 = params[shape.b1_at(k)];
            for (std::size_t j = 0; j < shape.n_in; ++j)
                z1 += params[shape.w1_at(k, j)] * x[j];
            act[k] = z1 > 0.0 ? z1 : 0.0;
            z2 += params[shape.w2_at(k)] * act[k];
        }
        const double y = static_cast<double>(targets[i]);
        loss += (std::max(z2, 0.0) - y * z2 + std::log1p(std::exp(-std::abs(z2)))) *
                inv_n;

        const double dz2 = (sigmoid(z2) - y) * inv_n;
        grad[shape.b2_at()] += dz2;
        for (std::size_t k = 0; k < shape.hidden; ++k) {
            grad[shape.w2_at(k)] += dz2 * act[k];
            if (act[k] > 0.0) {
                const double dz1 = dz2 * params[shape.w2_at(k)];
                grad[shape.b1_at(k)] += dz1;
                for (std::size_t j = 0; j < shape.n_in; ++j)
                    grad[shape.w1_at(k, j)] += dz1 * x[j];
            }
        }
    }
    return loss;
}

struct NeuralConfig {
    std::size_t hidden = 32;
    std::size_t epochs = 200;
    double learning_rate = 0.5;

    void validate() const {
        if (hidden < 1) throw std::invalid_argument("neural: need hidden >= 1");
        if (epochs < 1) throw std::invalid_argument("neural: need epochs >= 1");
        if (!(learning_rate > 0.0))
            throw std::invalid_argument("neural: learning rate must be > 0");
    }
};

class NeuralModel {
  public:
    static NeuralModel train(const WindowFrame& frame, const NeuralConfig& cfg,
                             Seed seed) {
        cfg.validate();
        if (frame.rows.empty()) throw std::invalid_argument("neural: empty frame");
        TreeModel::require_both_classes(frame.rows);

        NeuralModel m;
        m.shape_ = NeuralShape{frame.rows.front().features.size(), cfg.hidden};
        m.scaler_ = FeatureScaler::fit(frame.rows);
        m.params_ = glorot_init(m.shape_, seed);

        std::vector<std::vector<double>> x(frame.rows.size());
        std::vector<int> y(frame.rows.size());
        for (std::size_t i = 0; i < frame.rows.size(); ++i) {
            x[i].resize(m.shape_.n_in);
            for (std::size_t j = 0; j < m.shape_.n_in; ++j)
                x[i][j] = m.scaler_.apply(frame.rows[i].features[j], j);
            y[i] = frame.rows[i].target;
        }

        std::vector<double> grad;
        for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
            neural_loss_and_grad(m.shape_, m.params_, x, y, grad);
            for (std::size_t k = 0; k < m.params_.size(); ++k)
                m.params_[k] -= cfg.learning_rate * grad[k];
        }
        return m;
    }

    double predict_proba(const std::vector<double>& features) const {
        if (features.size() != shape_.n_in)
            throw std::invalid_argument("neural: feature arity mismatch");
        double z2 = params_[shape_.b2_at()];
        for (std::size_t k = 0; k < shape_.hidden; ++k) {
            double z1 = params_[shape_.b1_at(k)];
            for (std::size_t j = 0; j < shape_.n_in; ++j)
                z1 += params_[shape_.w1_at(k, j)] * scaler_.apply(features[j], j);
            if (z1 > 0.0) z2 += params_[shape_.w2_at(k)] * z1;
        }
        return sigmoid(z2);
    }

    static std::vector<double> glorot_init(const NeuralShape& shape, Seed seed) {
        Rng rng{seed};
        std::vector<double> params(shape.param_count(), 0.0);
        const double s1 =
            std::sqrt(6.0 / static_cast<double>(shape.n_in + shape.hidden));
        const double s2 = std::sqrt(6.0 / static_cast<double>(shape.hidden + 1));
        for (std::size_t k = 0; k < shape.hidden; ++k)
            for (std::size_t j = 0; j < shape.n_in; ++j)
                params[shape.w1_at(k, j)] = s1 * (2.0 * rng.uniform01() - 1.0);
        for (std::size_t k = 0; k < shape.hidden; ++k)
            params[shape.w2_at(k)] = s2 * (2.0 * rng.uniform01() - 1.0);
        return params;
    }

    const NeuralShape& shape() const { return shape_; }
    const std::vector<double>& params() const { return params_; }

  private:
    NeuralShape shape_;
    FeatureScaler scaler_;
    std::vector<double> params_;
};

}  // namespace jumplab
