#pragma once

// One entry point over the classifier families, so experiments and the CLI
// can treat the choice as configuration.

#include "curveml/euler_features.hpp"
#include "curveml/learn/forest.hpp"
#include "curveml/learn/logistic.hpp"
#include "curveml/learn/naive_bayes.hpp"
#include "curveml/metrics.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace curveml::learn {

enum class ClassifierKind { naive_bayes, gaussian_nb, logistic, forest };

/// "nb", "nb-gaussian", "logistic", "forest".
std::string_view classifier_name(ClassifierKind kind) noexcept;
std::optional<ClassifierKind> parse_classifier(std::string_view name) noexcept;

struct TrainOptions {
    LogisticHyper logistic;
    ForestHyper forest;
    double nb_alpha = 1.0;
    unsigned workers = 1;
};

struct TrainedModel {
    ClassifierKind kind = ClassifierKind::naive_bayes;
    std::vector<std::string> class_names;
    std::variant<CategoricalNBModel, GaussianNBModel, LogisticModel, ForestModel> state;

    std::size_t feature_dim() const noexcept;
};

/// Throws InputError on an empty training set or fewer than 2 classes.
TrainedModel train_classifier(ClassifierKind kind, const LabeledDataset& train, const TrainOptions& options = {});

std::size_t predict(const TrainedModel& model, std::span<const std::int64_t> features);

/// Confusion matrix of the model over a dataset sharing its class order.
ConfusionMatrix evaluate(const TrainedModel& model, const LabeledDataset& data, unsigned workers = 1);

} // namespace curveml::learn
