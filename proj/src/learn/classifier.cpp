#include "curveml/learn/classifier.hpp"

#include "curveml/error.hpp"
#include "curveml/parallel.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace curveml::learn {

namespace {

constexpr std::array<std::pair<ClassifierKind, std::string_view>, 4> kNames{{
    {ClassifierKind::naive_bayes, "nb"},
    {ClassifierKind::gaussian_nb, "nb-gaussian"},
    {ClassifierKind::logistic, "logistic"},
    {ClassifierKind::forest, "forest"},
}};

} // namespace

std::string_view classifier_name(ClassifierKind kind) noexcept {
    for (const auto& [k, name] : kNames)
        if (k == kind) return name;
    return "unknown";
}

std::optional<ClassifierKind> parse_classifier(std::string_view name) noexcept {
    for (const auto& [k, n] : kNames)
        if (n == name) return k;
    return std::nullopt;
}

std::size_t TrainedModel::feature_dim() const noexcept {
    return std::visit([](const auto& m) { return m.feature_dim; }, state);
}

TrainedModel train_classifier(ClassifierKind kind, const LabeledDataset& train, const TrainOptions& options) {
    if (train.rows.empty()) throw InputError("training set is empty");
    if (train.num_classes() < 2) throw InputError("training needs at least 2 classes");
    train.validate();
    TrainedModel model;
    model.kind = kind;
    model.class_names = train.class_names;
    switch (kind) {
    case ClassifierKind::naive_bayes: model.state = train_categorical_nb(train, options.nb_alpha); break;
    case ClassifierKind::gaussian_nb: model.state = train_gaussian_nb(train); break;
    case ClassifierKind::logistic: model.state = train_logistic(train, options.logistic); break;
    case ClassifierKind::forest: model.state = train_random_forest(train, options.forest, options.workers); break;
    }
    return model;
}

std::size_t predict(const TrainedModel& model, std::span<const std::int64_t> features) {
    struct Visitor {
        std::span<const std::int64_t> x;
        std::size_t operator()(const CategoricalNBModel& m) const { return predict_nb(m, x); }
        std::size_t operator()(const GaussianNBModel& m) const { return predict_nb(m, x); }
        std::size_t operator()(const LogisticModel& m) const { return predict_logistic(m, x); }
        std::size_t operator()(const ForestModel& m) const { return predict_forest(m, x); }
    };
    if (features.size() != model.feature_dim()) throw std::invalid_argument("feature vector has the wrong length");
    return std::visit(Visitor{features}, model.state);
}

ConfusionMatrix evaluate(const TrainedModel& model, const LabeledDataset& data, unsigned workers) {
    if (data.class_names != model.class_names)
        throw std::invalid_argument("evaluation data uses a different class order than the model");
    std::vector<std::size_t> predicted(data.rows.size());
    parallel_for(data.rows.size(), workers, [&](std::size_t i) { predicted[i] = predict(model, data.rows[i].features); });
    ConfusionMatrix cm(data.class_names);
    for (std::size_t i = 0; i < data.rows.size(); ++i) cm.add(data.rows[i].class_index, predicted[i]);
    return cm;
}

} // namespace curveml::learn
