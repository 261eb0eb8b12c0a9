#pragma once

// Named classification experiments over curve data, plus the synthetic parity
// task and the zero-count study, which need no curve classifier pipeline.

#include "curveml/curve_record.hpp"
#include "curveml/euler_features.hpp"
#include "curveml/learn/classifier.hpp"
#include "curveml/learn/split.hpp"
#include "curveml/metrics.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace curveml {

struct ConductorRange {
    std::int64_t lo = 1;
    std::int64_t hi = 1;

    bool contains(std::int64_t q) const noexcept { return lo <= q && q <= hi; }
    bool overlaps(const ConductorRange& o) const noexcept { return lo <= o.hi && o.lo <= hi; }
    std::string to_string() const;

    friend bool operator==(const ConductorRange&, const ConductorRange&) = default;
};

struct ExperimentConfig {
    std::string name;
    std::string description;
    CurveFamily family = CurveFamily::elliptic;
    LabelSelector selector = LabelSelector::rank;
    std::vector<std::string> class_filter;  // class names in class-index order
    VectorKind kind = VectorKind::l_elliptic;
    int N = 100;
    ConductorRange train_range;
    ConductorRange validation_range;
    learn::ClassifierKind classifier = learn::ClassifierKind::naive_bayes;
    learn::SplitConfig split;  // split.seed seeds every random step of the run
    std::optional<std::size_t> per_class_target;  // balanced size cap per class

    /// Distinct ranges: train on one, validate on the other, no split.
    bool extrapolation() const noexcept { return !(train_range == validation_range); }

    /// Throws InputError on an inconsistent configuration.
    void validate() const;
};

/// The named experiments, in a fixed order.
std::vector<ExperimentConfig> builtin_catalog();
std::optional<ExperimentConfig> find_experiment(std::string_view name);

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<std::uint64_t> available;  // per class, after filtering, before balancing
    std::vector<std::uint64_t> train_counts;
    std::vector<std::uint64_t> validation_counts;
    ConfusionMatrix confusion;
    double precision = 0.0;
    double mcc = 0.0;
    double wall_seconds = 0.0;  // not rendered, so reruns compare byte for byte

    /// "key=value" lines.
    std::string render() const;
};

struct RunOptions {
    unsigned workers = 1;
    VectorCache* cache = nullptr;
    std::optional<learn::ClassifierKind> classifier;  // overrides config.classifier
    learn::TrainOptions train;  // forest seed and workers are filled in from the run
};

/// Filters records by family, conductor range and class_filter, builds
/// features, balances, splits (or uses the two ranges), trains and validates.
/// Throws InputError when a class is missing or the validation side is empty.
ExperimentReport run_experiment(const ExperimentConfig& cfg, std::span<const CurveRecord> records,
                                const RunOptions& options = {});

struct ParityResult {
    double nb_accuracy = 0.0;
    double gaussian_nb_accuracy = 0.0;
    double forest_accuracy = 0.0;
    std::size_t train_rows = 0;
    std::size_t validation_rows = 0;

    std::string render() const;
};

/// Class "uniform": entries uniform in [-10, 10]. Class "even": 2 * uniform in
/// [-5, 5]. Balanced, split 80/20, default hyperparameters.
ParityResult synthetic_parity_experiment(int dim, std::size_t count_per_class, std::uint64_t seed,
                                         unsigned workers = 1);

struct ZeroCountStudy {
    CountSummary no_integral_points;
    CountSummary one_integral_point;

    std::string render() const;
    std::string histogram_csv() const;
};

/// Zero counts of L vectors of length N, split by num_integral_points 0 or 1.
/// Curves with other or missing counts are ignored. Throws InputError when a
/// class is empty.
ZeroCountStudy zero_count_study(std::span<const CurveRecord> records, int N, unsigned workers = 1,
                                VectorCache* cache = nullptr);

struct SweepPoint {
    int N = 0;
    double precision = 0.0;
    double mcc = 0.0;
};

/// Reruns `base` for each N (L vectors only).
std::vector<SweepPoint> coefficient_sweep(const ExperimentConfig& base, std::span<const CurveRecord> records,
                                          std::span<const int> Ns, const RunOptions& options = {});

} // namespace curveml
