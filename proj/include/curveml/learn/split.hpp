#pragma once

#include "curveml/euler_features.hpp"

#include <cstdint>
#include <optional>
#include <utility>

namespace curveml::learn {

struct SplitConfig {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
    bool balance = true;

    void validate() const;
};

/// Downsamples every class to the smallest class size (or `cap`, if smaller),
/// sampling without replacement, then shuffles the rows. Deterministic in seed.
/// Throws InputError with fewer than 2 classes or an empty class.
LabeledDataset balance_classes(const LabeledDataset& ds, std::uint64_t seed,
                               std::optional<std::size_t> cap = std::nullopt);

struct TrainValidation {
    LabeledDataset train;
    LabeledDataset validation;
};

/// Stratified split: floor(train_fraction * n_c) rows of each class go to
/// training, clamped so both sides keep at least one row. Throws InputError if
/// a class has fewer than 2 rows.
TrainValidation split(const LabeledDataset& ds, const SplitConfig& cfg);

/// Rows at the given indices, in the given order.
LabeledDataset subset(const LabeledDataset& ds, std::span<const std::size_t> indices);

} // namespace curveml::learn
