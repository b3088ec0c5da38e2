#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "jumplab/pipeline/frames.hpp"

namespace jumplab {

struct LogisticConfig {
    double learning_rate = 0.5;
    std::size_t epochs = 500;
    double l2 = 0.0;  ///< ridge penalty on weights (not the intercept)

    void validate() const {
        if (!(learning_rate > 0.0))
            throw std::invalid_argument("logistic: learning rate must be > 0");
        if (epochs < 1) throw std::invalid_argument("logistic: need epochs >= 1");
        if (l2 < 0.0) throw std::invalid_argument("logistic: l2 must be >= 0");
    }
};

/// Feature standardization fitted on the training frame and replayed at
/// prediction time; a zero-variance column passes through unscaled.
struct FeatureScaler {
    std::vector<double> mean;
    std::vector<double> scale;

    static FeatureScaler fit(const std::vector<FrameRow>& rows) {
        const std::size_t n = rows.front().features.size();
        FeatureScaler s;
        s.mean.assign(n, 0.0);
        s.scale.assign(n, 0.0);
        for (const FrameRow& r : rows)
            for (std::size_t j = 0; j < n; ++j) s.mean[j] += r.features[j];
        for (double& m : s.mean) m /= static_cast<double>(rows.size());
        for (const FrameRow& r : rows)
            for (std::size_t j = 0; j < n; ++j) {
                const double d = r.features[j] - s.mean[j];
                s.scale[j] += d * d;
            }
        for (double& v : s.scale) {
            v = std::sqrt(v / static_cast<double>(rows.size()));
            if (v == 0.0) v = 1.0;
        }
        return s;
    }

    double apply(double x, std::size_t j) const { return (x - mean[j]) / scale[j]; }
};

inline double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

/// Logistic regression trained by full-batch gradient descent on mean
/// cross-entropy over standardized features. Weights start at zero, so the
/// fit is deterministic with no seed involved.
class LogisticModel {
  public:
    static LogisticModel train(const WindowFrame& frame, const LogisticConfig& cfg) {
        cfg.validate();
        if (frame.rows.empty()) throw std::invalid_argument("logistic: empty frame");
        const std::size_t n = frame.rows.front().features.size();
        const std::size_t rows = frame.rows.size();

        LogisticModel m;
        m.scaler_ = FeatureScaler::fit(frame.rows);
        m.w_.assign(n, 0.0);
        m.b_ = 0.0;

        std::vector<double> z(rows * n);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < n; ++j)
                z[i * n + j] = m.scaler_.apply(frame.rows[i].features[j], j);

        std::vector<double> grad(n);
        for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
            std::fill(grad.begin(), grad.end(), 0.0);
            double grad_b = 0.0;
            for (std::size_t i = 0; i < rows; ++i) {
                double a = m.b_;
                for (std::size_t j = 0; j < n; ++j) a += m.w_[j] * z[i * n + j];
                const double err =
                    sigmoid(a) - static_cast<double>(frame.rows[i].target);
                for (std::size_t j = 0; j < n; ++j) grad[j] += err * z[i * n + j];
                grad_b += err;
            }
            const double inv = 1.0 / static_cast<double>(rows);
            for (std::size_t j = 0; j < n; ++j)
                m.w_[j] -= cfg.learning_rate * (grad[j] * inv + cfg.l2 * m.w_[j]);
            m.b_ -= cfg.learning_rate * grad_b * inv;
        }
        return m;
    }

    double predict_proba(const std::vector<double>& features) const {
        if (features.size() != w_.size())
            throw std::invalid_argument("logistic: feature arity mismatch");
        double a = b_;
        for (std::size_t j = 0; j < features.size(); ++j)
            a += w_[j] * scaler_.apply(features[j], j);
        return sigmoid(a);
    }

    const std::vector<double>& weights() const { return w_; }
    double intercept() const { return b_; }

  private:
    FeatureScaler scaler_;
    std::vector<double> w_;
    double b_ = 0.0;
};

}  // namespace jumplab
