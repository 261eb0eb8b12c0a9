#include "curveml/learn/forest.hpp"

#include "curveml/error.hpp"
#include "curveml/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

namespace curveml::learn {

double gini_impurity(std::span<const std::uint32_t> hist) noexcept {
    double n = 0.0, sq = 0.0;
    for (auto c : hist) {
        n += c;
        sq += static_cast<double>(c) * c;
    }
    return n == 0.0 ? 0.0 : 1.0 - sq / (n * n);
}

std::span<const std::uint32_t> DecisionTree::leaf_for(std::span<const std::int64_t> features,
                                                      std::size_t num_classes) const {
    std::int32_t i = 0;
    while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
        const auto& nd = nodes[static_cast<std::size_t>(i)];
        i = features[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return std::span(histograms).subspan(nodes[static_cast<std::size_t>(i)].hist_offset, num_classes);
}

int DecisionTree::depth() const {
    std::vector<int> d(nodes.size(), 0);
    int best = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {  // children always follow parents
        best = std::max(best, d[i]);
        if (nodes[i].feature >= 0) {
            d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
            d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
        }
    }
    return best;
}

namespace {

struct Split {
    std::int32_t feature = -1;
    std::int64_t threshold = 0;
    double score = 0.0;  // sum over children of n_child * gini(child)
};

class TreeBuilder {
public:
    TreeBuilder(const LabeledDataset& ds, const ForestHyper& hyper, int m, std::uint64_t seed)
        : ds_(ds), hyper_(hyper), m_(m), K_(ds.num_classes()), rng_(seed) {
        features_.resize(ds.feature_dim);
        std::iota(features_.begin(), features_.end(), 0);
    }

    DecisionTree build(std::uint64_t seed) {
        DecisionTree tree;
        tree.seed = seed;
        const std::size_t n = ds_.rows.size();
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        samples_.resize(n);
        for (auto& s : samples_) s = pick(rng_);

        struct Pending {
            std::size_t node, begin, end;
            int depth;
        };
        tree.nodes.emplace_back();
        std::vector<Pending> stack{{0, 0, n, 0}};
        while (!stack.empty()) {
            const Pending cur = stack.back();
            stack.pop_back();
            const auto hist = histogram(cur.begin, cur.end);
            const std::size_t count = cur.end - cur.begin;
            std::optional<Split> split;
            if (cur.depth < hyper_.max_depth && count >= 2 * static_cast<std::size_t>(hyper_.min_leaf) &&
                gini_impurity(hist) > 0.0)
                split = best_split(cur.begin, cur.end, hist);
            if (!split) {
                tree.nodes[cur.node].hist_offset = static_cast<std::uint32_t>(tree.histograms.size());
                tree.histograms.insert(tree.histograms.end(), hist.begin(), hist.end());
                continue;
            }
            const auto mid = std::stable_partition(
                samples_.begin() + static_cast<std::ptrdiff_t>(cur.begin), samples_.begin() + static_cast<std::ptrdiff_t>(cur.end),
                [&](std::size_t r) {
                    return ds_.rows[r].features[static_cast<std::size_t>(split->feature)] <= split->threshold;
                });
            const auto cut = static_cast<std::size_t>(mid - samples_.begin());
            const auto left = static_cast<std::int32_t>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            auto& nd = tree.nodes[cur.node];
            nd.feature = split->feature;
            nd.threshold = split->threshold;
            nd.left = left;
            nd.right = left + 1;
            // right pushed first so the left subtree is laid out first
            stack.push_back({static_cast<std::size_t>(left + 1), cut, cur.end, cur.depth + 1});
            stack.push_back({static_cast<std::size_t>(left), cur.begin, cut, cur.depth + 1});
        }
        return tree;
    }

private:
    std::vector<std::uint32_t> histogram(std::size_t begin, std::size_t end) const {
        std::vector<std::uint32_t> h(K_, 0);
        for (std::size_t i = begin; i < end; ++i) ++h[ds_.rows[samples_[i]].class_index];
        return h;
    }

    static double weighted_gini(std::span<const std::uint32_t> h, double n) {
        double sq = 0.0;
        for (auto c : h) sq += static_cast<double>(c) * c;
        return n - sq / n;
    }

    std::optional<Split> best_split(std::size_t begin, std::size_t end, std::span<const std::uint32_t> parent) {
        const std::size_t count = end - begin;
        const double parent_score = weighted_gini(parent, static_cast<double>(count));
        // partial Fisher-Yates: the first m_ entries become this node's candidates
        const std::size_t d = features_.size();
        for (std::size_t i = 0; i < static_cast<std::size_t>(m_); ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, d - 1);
            std::swap(features_[i], features_[pick(rng_)]);
        }
        std::optional<Split> best;
        const auto min_leaf = static_cast<std::size_t>(hyper_.min_leaf);
        std::vector<std::uint32_t> left(K_), right(K_);
        for (std::size_t fi = 0; fi < static_cast<std::size_t>(m_); ++fi) {
            const std::size_t f = features_[fi];
            column_.clear();
            for (std::size_t i = begin; i < end; ++i) {
                const auto& row = ds_.rows[samples_[i]];
                column_.emplace_back(row.features[f], row.class_index);
            }
            std::sort(column_.begin(), column_.end());
            if (column_.front().first == column_.back().first) continue;
            std::fill(left.begin(), left.end(), 0);
            std::copy(parent.begin(), parent.end(), right.begin());
            for (std::size_t i = 0; i + 1 < count; ++i) {
                ++left[column_[i].second];
                --right[column_[i].second];
                const std::int64_t a = column_[i].first, b = column_[i + 1].first;
                if (a == b) continue;
                const std::size_t nl = i + 1, nr = count - nl;
                if (nl < min_leaf || nr < min_leaf) continue;
                const double score =
                    weighted_gini(left, static_cast<double>(nl)) + weighted_gini(right, static_cast<double>(nr));
                if (!best || score < best->score)
                    best = Split{static_cast<std::int32_t>(f), a + (b - a) / 2, score};
            }
        }
        if (!best || !(best->score < parent_score - 1e-12)) return std::nullopt;
        return best;
    }

    const LabeledDataset& ds_;
    const ForestHyper& hyper_;
    int m_;
    std::size_t K_;
    std::mt19937_64 rng_;
    std::vector<std::size_t> features_;
    std::vector<std::size_t> samples_;
    std::vector<std::pair<std::int64_t, std::size_t>> column_;
};

} // namespace

ForestModel train_random_forest(const LabeledDataset& train, const ForestHyper& hyper, unsigned workers) {
    if (train.rows.empty()) throw InputError("training set is empty");
    if (train.num_classes() < 1) throw InputError("training set has no classes");
    if (hyper.num_trees < 1 || hyper.max_depth < 0 || hyper.min_leaf < 1 || hyper.features_per_split < 0)
        throw std::invalid_argument("invalid forest hyperparameters");
    if (train.feature_dim == 0) throw InputError("training set has no features");
    ForestModel model;
    model.num_classes = train.num_classes();
    model.feature_dim = train.feature_dim;
    model.max_depth = hyper.max_depth;
    model.features_per_split =
        hyper.features_per_split > 0
            ? std::min<int>(hyper.features_per_split, static_cast<int>(train.feature_dim))
            : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(train.feature_dim))));
    model.trees.resize(static_cast<std::size_t>(hyper.num_trees));
    parallel_for(model.trees.size(), workers, [&](std::size_t t) {
        const std::uint64_t seed = hyper.seed + t;
        TreeBuilder builder(train, hyper, model.features_per_split, seed);
        model.trees[t] = builder.build(seed);
    });
    return model;
}

std::size_t predict_forest(const ForestModel& model, std::span<const std::int64_t> features) {
    if (features.size() != model.feature_dim) throw std::invalid_argument("feature vector has the wrong length");
    std::vector<std::uint32_t> votes(model.num_classes, 0);
    for (const auto& tree : model.trees) {
        const auto hist = tree.leaf_for(features, model.num_classes);
        ++votes[static_cast<std::size_t>(std::max_element(hist.begin(), hist.end()) - hist.begin())];
    }
    return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

} // namespace curveml::learn
