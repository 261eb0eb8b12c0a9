#pragma once

#include "curveml/euler_features.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace curveml::learn {

struct ForestHyper {
    int num_trees = 100;
    int max_depth = 16;
    int min_leaf = 2;
    std::uint64_t seed = 0;
    int features_per_split = 0;  // 0 selects ceil(sqrt(feature_dim))
};

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    std::int64_t threshold = 0; // go left when x[feature] <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t hist_offset = 0;  // leaves only, into DecisionTree::histograms

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
    std::uint64_t seed = 0;
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    std::vector<std::uint32_t> histograms;

    std::span<const std::uint32_t> leaf_for(std::span<const std::int64_t> features, std::size_t num_classes) const;
    int depth() const;

    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct ForestModel {
    std::size_t num_classes = 0;
    std::size_t feature_dim = 0;
    int max_depth = 0;
    int features_per_split = 0;
    std::vector<DecisionTree> trees;
};

/// 1 - sum_k (c_k / n)^2; 0 for an empty histogram.
double gini_impurity(std::span<const std::uint32_t> hist) noexcept;

/// Tree t is grown from bootstrap seed hyper.seed + t, so the result does not
/// depend on the number of workers.
ForestModel train_random_forest(const LabeledDataset& train, const ForestHyper& hyper = {}, unsigned workers = 1);

/// Majority vote of per-tree leaf argmaxes; ties go to the lowest class index.
std::size_t predict_forest(const ForestModel& model, std::span<const std::int64_t> features);

} // namespace curveml::learn
