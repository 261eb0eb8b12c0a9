#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace curveml {

/// counts[true][predicted].
struct ConfusionMatrix {
    std::vector<std::string> class_names;
    std::vector<std::vector<std::uint64_t>> counts;

    explicit ConfusionMatrix(std::vector<std::string> names = {});
    static ConfusionMatrix from_counts(std::vector<std::vector<std::uint64_t>> counts);

    std::size_t size() const noexcept { return counts.size(); }
    void add(std::size_t truth, std::size_t predicted, std::uint64_t n = 1);
    std::uint64_t total() const noexcept;
    std::uint64_t trace() const noexcept;
};

/// Fraction of predictions on the diagonal. Throws std::invalid_argument when empty.
double precision(const ConfusionMatrix& cm);

/// Matthews correlation: the binary formula for 2 classes, the covariance form
/// otherwise. A zero factor under the square root gives 0.
double mcc(const ConfusionMatrix& cm);

double mcc_binary(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) noexcept;
double mcc_multiclass(const ConfusionMatrix& cm) noexcept;

struct CountSummary {
    double mean = 0.0;
    double std = 0.0;  // population
    std::map<std::int64_t, std::uint64_t> histogram;  // unit-width bins
};

CountSummary summarize_counts(std::span<const std::int64_t> values);

/// "key=value" lines in a fixed order.
std::string render_summary(const CountSummary& s, const std::string& prefix);

/// CSV with header `true\predicted,<names...>` and one row per true class.
std::string confusion_csv(const ConfusionMatrix& cm);

/// CSV `bin,<name_0>,<name_1>,...` over the union of bins, missing bins as 0.
std::string histogram_csv(std::span<const CountSummary> summaries, std::span<const std::string> names);

} // namespace curveml
