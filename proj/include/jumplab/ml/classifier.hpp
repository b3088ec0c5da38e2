#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jumplab/ml/forest.hpp"
#include "jumplab/ml/logistic.hpp"
#include "jumplab/ml/neural.hpp"
#include "jumplab/ml/report.hpp"
#include "jumplab/ml/tree.hpp"

namespace jumplab {

/// Trained binary classifier. Implementations are immutable after training
/// and safe to share across threads; new classifier families plug in by
/// implementing this interface.
class Model {
  public:
    virtual ~Model() = default;
    virtual double predict_proba(const std::vector<double>& features) const = 0;
};

namespace detail {

template <typename M>
class ModelAdapter final : public Model {
  public:
    explicit ModelAdapter(M inner) : inner_(std::move(inner)) {}
    double predict_proba(const std::vector<double>& features) const override {
        return inner_.predict_proba(features);
    }
    const M& inner() const { return inner_; }

  private:
    M inner_;
};

}  // namespace detail

enum class ClassifierKind { logistic, decision_tree, random_forest, feedforward_net };

inline std::string to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::logistic: return "logistic";
        case ClassifierKind::decision_tree: return "decision-tree";
        case ClassifierKind::random_forest: return "random-forest";
        case ClassifierKind::feedforward_net: return "feedforward-net";
    }
    throw std::logic_error("classifier: unknown kind");
}

inline ClassifierKind classifier_kind_from(const std::string& name) {
    if (name == "logistic") return ClassifierKind::logistic;
    if (name == "decision-tree") return ClassifierKind::decision_tree;
    if (name == "random-forest") return ClassifierKind::random_forest;
    if (name == "feedforward-net") return ClassifierKind::feedforward_net;
    throw std::invalid_argument("classifier: unknown kind '" + name + "'");
}

/// Which classifier to train, with every family's hyperparameters carried
/// along (only the selected kind's block is consulted).
struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::logistic;
    LogisticConfig logistic;
    TreeConfig tree;
    ForestConfig forest;
    NeuralConfig neural;
    Seed seed{0};

    void validate() const {
        logistic.validate();
        tree.validate();
        forest.validate();
        neural.validate();
    }
};

inline std::unique_ptr<Model> train(const ClassifierSpec& spec,
                                    const WindowFrame& frame) {
    spec.validate();
    if (frame.rows.empty()) throw std::invalid_argument("train: empty frame");
    TreeModel::require_both_classes(frame.rows);
    switch (spec.kind) {
        case ClassifierKind::logistic:
            return std::make_unique<detail::ModelAdapter<LogisticModel>>(
                LogisticModel::train(frame, spec.logistic));
        case ClassifierKind::decision_tree:
            return std::make_unique<detail::ModelAdapter<TreeModel>>(
                TreeModel::train(frame, spec.tree));
        case ClassifierKind::random_forest:
            return std::make_unique<detail::ModelAdapter<ForestModel>>(
                ForestModel::train(frame, spec.forest, spec.seed));
        case ClassifierKind::feedforward_net:
            return std::make_unique<detail::ModelAdapter<NeuralModel>>(
                NeuralModel::train(frame, spec.neural, spec.seed));
    }
    throw std::logic_error("train: unknown kind");
}

/// Scores a model on a test frame: probabilities thresholded at 0.5 (ties
/// predict 1, matching the hard theta rule), metrics derived exactly from
/// the confusion counts.
inline ClassificationReport evaluate(const Model& model, const WindowFrame& frame) {
    if (frame.rows.empty()) throw std::invalid_argument("evaluate: empty test frame");
    std::array<std::array<std::size_t, 2>, 2> confusion{{{0, 0}, {0, 0}}};
    for (const FrameRow& row : frame.rows) {
        const int predicted = model.predict_proba(row.features) >= 0.5 ? 1 : 0;
        ++confusion[static_cast<std::size_t>(row.target)]
                   [static_cast<std::size_t>(predicted)];
    }
    return report_from_confusion(confusion);
}

}  // namespace jumplab
