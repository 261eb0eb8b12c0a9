#pragma once

#include "curveml/euler_features.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace curveml::learn {

struct LogisticHyper {
    double l2_lambda = 1e-4;
    int max_iters = 2000;
    double tolerance = 1e-6;  // on the gradient max-norm
};

/// Standardized design matrix plus labels, and the penalized cross-entropy over
/// it. Two classes use one sigmoid head, more use a softmax head per class.
///
/// Parameters are laid out head by head: [w_h (feature_dim), b_h].
class LogisticObjective {
public:
    LogisticObjective(std::vector<double> x, std::vector<std::size_t> y, std::size_t rows, std::size_t feature_dim,
                      std::size_t num_classes, double l2_lambda);

    std::size_t num_heads() const noexcept { return num_classes_ == 2 ? 1 : num_classes_; }
    std::size_t num_params() const noexcept { return num_heads() * (dim_ + 1); }

    /// Mean cross-entropy + (lambda / 2) * ||weights||^2; biases are not penalized.
    /// Writes the gradient into `grad` when it is non-empty.
    double evaluate(std::span<const double> params, std::span<double> grad) const;

private:
    std::vector<double> x_;  // rows_ x dim_, row-major
    std::vector<std::size_t> y_;
    std::size_t rows_;
    std::size_t dim_;
    std::size_t num_classes_;
    double lambda_;
};

struct LogisticModel {
    std::size_t num_classes = 0;
    std::size_t feature_dim = 0;
    std::vector<double> mean;   // standardization, from training data
    std::vector<double> scale;  // > 0
    std::vector<double> params; // LogisticObjective layout
    int iterations = 0;

    std::vector<double> decision(std::span<const std::int64_t> features) const;
};

/// Full-batch gradient descent from zero. The step starts at 1.0 and is halved
/// until the Armijo condition holds; the accepted step carries over to the next
/// iteration. Throws std::runtime_error on a non-finite loss.
LogisticModel train_logistic(const LabeledDataset& train, const LogisticHyper& hyper = {});
std::size_t predict_logistic(const LogisticModel& model, std::span<const std::int64_t> features);

} // namespace curveml::learn
