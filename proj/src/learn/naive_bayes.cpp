#include "curveml/learn/naive_bayes.hpp"

#include "curveml/error.hpp"
#include "curveml/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace curveml::learn {

std::size_t argmax_lowest(std::span<const double> scores) noexcept {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best]) best = i;
    return best;
}

namespace {

std::vector<std::size_t> require_all_classes(const LabeledDataset& train) {
    if (train.num_classes() < 2) throw InputError("training needs at least 2 classes");
    auto counts = train.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] == 0) throw InputError("class '" + train.class_names[c] + "' has no training rows");
    return counts;
}

void require_dim(std::size_t want, std::size_t got) {
    if (want != got)
        throw std::invalid_argument("feature vector has " + std::to_string(got) + " entries, model expects " +
                                    std::to_string(want));
}

} // namespace

void GaussianNBModel::finalize() {
    inv_var.assign(num_classes, std::vector<double>(feature_dim));
    log_norm.assign(num_classes, 0.0);
    for (std::size_t c = 0; c < num_classes; ++c) {
        double s = std::log(priors[c]);
        for (std::size_t j = 0; j < feature_dim; ++j) {
            inv_var[c][j] = 1.0 / variances[c][j];
            s -= 0.5 * std::log(2.0 * std::numbers::pi * variances[c][j]);
        }
        log_norm[c] = s;
    }
}

std::vector<double> GaussianNBModel::log_scores(std::span<const std::int64_t> features) const {
    require_dim(feature_dim, features.size());
    std::vector<double> x(features.begin(), features.end());
    const auto& k = simd::kernels();
    std::vector<double> scores(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c)
        scores[c] = log_norm[c] - 0.5 * k.weighted_sq_dist(x.data(), means[c].data(), inv_var[c].data(), feature_dim);
    return scores;
}

GaussianNBModel train_gaussian_nb(const LabeledDataset& train) {
    const auto counts = require_all_classes(train);
    const std::size_t K = train.num_classes(), d = train.feature_dim;
    GaussianNBModel m;
    m.num_classes = K;
    m.feature_dim = d;
    m.priors.resize(K);
    m.means.assign(K, std::vector<double>(d, 0.0));
    m.variances.assign(K, std::vector<double>(d, 0.0));

    std::vector<double> all_mean(d, 0.0), all_var(d, 0.0);
    for (const auto& r : train.rows)
        for (std::size_t j = 0; j < d; ++j) {
            m.means[r.class_index][j] += static_cast<double>(r.features[j]);
            all_mean[j] += static_cast<double>(r.features[j]);
        }
    const double n = static_cast<double>(train.rows.size());
    for (std::size_t c = 0; c < K; ++c) {
        m.priors[c] = static_cast<double>(counts[c]) / n;
        for (auto& v : m.means[c]) v /= static_cast<double>(counts[c]);
    }
    for (auto& v : all_mean) v /= n;
    for (const auto& r : train.rows)
        for (std::size_t j = 0; j < d; ++j) {
            const double x = static_cast<double>(r.features[j]);
            const double dc = x - m.means[r.class_index][j];
            const double da = x - all_mean[j];
            m.variances[r.class_index][j] += dc * dc;
            all_var[j] += da * da;
        }
    double max_var = 0.0;
    for (auto v : all_var) max_var = std::max(max_var, v / n);
    m.epsilon = 1e-9 * (max_var > 0.0 ? max_var : 1.0);
    for (std::size_t c = 0; c < K; ++c)
        for (auto& v : m.variances[c]) v = v / static_cast<double>(counts[c]) + m.epsilon;
    m.finalize();
    return m;
}

std::size_t predict_nb(const GaussianNBModel& model, std::span<const std::int64_t> features) {
    const auto s = model.log_scores(features);
    return argmax_lowest(s);
}

void CategoricalNBModel::finalize() {
    log_prior.resize(num_classes);
    std::uint64_t total = 0;
    for (auto c : class_counts) total += c;
    for (std::size_t c = 0; c < num_classes; ++c)
        log_prior[c] = std::log(static_cast<double>(class_counts[c]) / static_cast<double>(total));
    log_prob.assign(feature_dim, {});
    for (std::size_t j = 0; j < feature_dim; ++j) {
        const auto& f = features[j];
        const std::size_t V = f.values.size();
        auto& lp = log_prob[j];
        lp.resize(num_classes * (V + 1));
        for (std::size_t c = 0; c < num_classes; ++c) {
            const double denom = std::log(static_cast<double>(class_counts[c]) + alpha * static_cast<double>(V + 1));
            for (std::size_t v = 0; v < V; ++v)
                lp[c * (V + 1) + v] = std::log(static_cast<double>(f.counts[c][v]) + alpha) - denom;
            lp[c * (V + 1) + V] = std::log(alpha) - denom;
        }
    }
}

std::vector<double> CategoricalNBModel::log_scores(std::span<const std::int64_t> x) const {
    require_dim(feature_dim, x.size());
    std::vector<double> scores(log_prior);
    for (std::size_t j = 0; j < feature_dim; ++j) {
        const auto& vals = features[j].values;
        const std::size_t V = vals.size();
        auto it = std::lower_bound(vals.begin(), vals.end(), x[j]);
        const std::size_t slot = (it != vals.end() && *it == x[j]) ? static_cast<std::size_t>(it - vals.begin()) : V;
        const auto& lp = log_prob[j];
        for (std::size_t c = 0; c < num_classes; ++c) scores[c] += lp[c * (V + 1) + slot];
    }
    return scores;
}

CategoricalNBModel train_categorical_nb(const LabeledDataset& train, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("smoothing alpha must be positive");
    const auto counts = require_all_classes(train);
    const std::size_t K = train.num_classes(), d = train.feature_dim;
    CategoricalNBModel m;
    m.num_classes = K;
    m.feature_dim = d;
    m.alpha = alpha;
    m.class_counts.assign(counts.begin(), counts.end());
    m.features.resize(d);
    std::vector<std::int64_t> column(train.rows.size());
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < train.rows.size(); ++i) column[i] = train.rows[i].features[j];
        auto& f = m.features[j];
        f.values = column;
        std::sort(f.values.begin(), f.values.end());
        f.values.erase(std::unique(f.values.begin(), f.values.end()), f.values.end());
        f.counts.assign(K, std::vector<std::uint64_t>(f.values.size(), 0));
        for (std::size_t i = 0; i < train.rows.size(); ++i) {
            const auto v = static_cast<std::size_t>(
                std::lower_bound(f.values.begin(), f.values.end(), column[i]) - f.values.begin());
            ++f.counts[train.rows[i].class_index][v];
        }
    }
    m.finalize();
    return m;
}

std::size_t predict_nb(const CategoricalNBModel& model, std::span<const std::int64_t> features) {
    const auto s = model.log_scores(features);
    return argmax_lowest(s);
}

} // namespace curveml::learn
