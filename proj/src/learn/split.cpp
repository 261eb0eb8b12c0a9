#include "curveml/learn/split.hpp"

#include "curveml/error.hpp"

#include <algorithm>
#include <random>

namespace curveml::learn {

void SplitConfig::validate() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InputError("train_fraction must lie strictly between 0 and 1");
}

LabeledDataset subset(const LabeledDataset& ds, std::span<const std::size_t> indices) {
    LabeledDataset out;
    out.feature_dim = ds.feature_dim;
    out.class_names = ds.class_names;
    out.rows.reserve(indices.size());
    for (auto i : indices) out.rows.push_back(ds.rows.at(i));
    return out;
}

namespace {

std::vector<std::vector<std::size_t>> rows_by_class(const LabeledDataset& ds) {
    std::vector<std::vector<std::size_t>> by(ds.num_classes());
    for (std::size_t i = 0; i < ds.rows.size(); ++i) by.at(ds.rows[i].class_index).push_back(i);
    return by;
}

} // namespace

LabeledDataset balance_classes(const LabeledDataset& ds, std::uint64_t seed, std::optional<std::size_t> cap) {
    if (ds.num_classes() < 2) throw InputError("balancing needs at least 2 classes");
    auto by = rows_by_class(ds);
    std::size_t target = cap.value_or(ds.rows.size());
    for (std::size_t c = 0; c < by.size(); ++c) {
        if (by[c].empty()) throw InputError("class '" + ds.class_names[c] + "' has no rows");
        target = std::min(target, by[c].size());
    }
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> keep;
    keep.reserve(target * by.size());
    for (auto& rows : by) {
        std::shuffle(rows.begin(), rows.end(), rng);
        keep.insert(keep.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(target));
    }
    std::shuffle(keep.begin(), keep.end(), rng);
    return subset(ds, keep);
}

TrainValidation split(const LabeledDataset& ds, const SplitConfig& cfg) {
    cfg.validate();
    if (ds.rows.empty()) throw InputError("cannot split an empty dataset");
    auto by = rows_by_class(ds);
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> train, validation;
    for (std::size_t c = 0; c < by.size(); ++c) {
        auto& rows = by[c];
        if (rows.size() < 2)
            throw InputError("class '" + ds.class_names[c] + "' has " + std::to_string(rows.size()) +
                             " rows; splitting needs at least 2");
        std::shuffle(rows.begin(), rows.end(), rng);
        auto n_train = static_cast<std::size_t>(cfg.train_fraction * static_cast<double>(rows.size()));
        n_train = std::clamp<std::size_t>(n_train, 1, rows.size() - 1);
        train.insert(train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
        validation.insert(validation.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
    }
    std::shuffle(train.begin(), train.end(), rng);
    std::sort(validation.begin(), validation.end());
    return {subset(ds, train), subset(ds, validation)};
}

} // namespace curveml::learn
