#pragma once

// Naive Bayes over integer feature vectors.
//
// Two per-feature likelihoods are available. GaussianNBModel fits a normal
// density per (class, feature). CategoricalNBModel treats each feature as a
// discrete variable over the values seen in training, with additive smoothing
// and one shared slot for unseen values; it is what "nb" means elsewhere,
// because the Euler-coefficient tasks are decided by which integers occur
// (all-even vs mixed parity), not by their spread.

#include "curveml/euler_features.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace curveml::learn {

struct GaussianNBModel {
    std::size_t num_classes = 0;
    std::size_t feature_dim = 0;
    std::vector<double> priors;                  // sum to 1
    std::vector<std::vector<double>> means;      // [class][feature]
    std::vector<std::vector<double>> variances;  // [class][feature], each >= epsilon
    double epsilon = 0.0;

    // Derived from the fields above by finalize().
    std::vector<std::vector<double>> inv_var;
    std::vector<double> log_norm;  // log prior - 1/2 sum log(2 pi var)

    void finalize();
    std::vector<double> log_scores(std::span<const std::int64_t> features) const;
};

/// Throws InputError when a class has no training rows.
GaussianNBModel train_gaussian_nb(const LabeledDataset& train);
std::size_t predict_nb(const GaussianNBModel& model, std::span<const std::int64_t> features);

struct CategoricalNBModel {
    struct Feature {
        std::vector<std::int64_t> values;            // sorted, distinct
        std::vector<std::vector<std::uint64_t>> counts;  // [class][value index]
    };

    std::size_t num_classes = 0;
    std::size_t feature_dim = 0;
    double alpha = 1.0;
    std::vector<std::uint64_t> class_counts;
    std::vector<Feature> features;

    // Derived by finalize(): per feature, [class * (V + 1) + v], slot V = unseen.
    std::vector<std::vector<double>> log_prob;
    std::vector<double> log_prior;

    void finalize();
    std::vector<double> log_scores(std::span<const std::int64_t> features) const;
};

CategoricalNBModel train_categorical_nb(const LabeledDataset& train, double alpha = 1.0);
std::size_t predict_nb(const CategoricalNBModel& model, std::span<const std::int64_t> features);

/// Index of the largest score, lowest index on ties.
std::size_t argmax_lowest(std::span<const double> scores) noexcept;

} // namespace curveml::learn
