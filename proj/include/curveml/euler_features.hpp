#pragma once

// Feature vectors built from Euler coefficients, and the labeled datasets the
// classifiers consume.

#include "curveml/curve_record.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace curveml {

enum class VectorKind { l_elliptic, l_genus2, binary, ternary, weierstrass };

std::string_view vector_kind_name(VectorKind kind) noexcept;
std::optional<VectorKind> parse_vector_kind(std::string_view name) noexcept;

struct EulerVector {
    std::string curve_label;
    VectorKind kind = VectorKind::l_elliptic;
    int N = 1;
    std::vector<std::int64_t> values;

    /// Length expected for (kind, N): N, 2N for genus 2, 5 for Weierstrass.
    static std::size_t expected_length(VectorKind kind, int N) noexcept;

    /// Throws InputError on a length/kind mismatch or out-of-range entries.
    void validate() const;

    friend bool operator==(const EulerVector&, const EulerVector&) = default;
};

/// p_1..p_N, or p_2..p_{N+1} with skip_two.
std::vector<std::uint32_t> nth_primes(int N, bool skip_two = false);

EulerVector euler_vector_elliptic(const EllipticCurveQ& curve, int N);

/// Interleaved (a1, a2) at 3, 5, 7, ... : values[2i], values[2i+1] belong to p_{i+2}.
EulerVector euler_vector_genus2(const Genus2CurveQ& curve, int N);

EulerVector binary_vector(const EulerVector& v);
EulerVector ternary_vector(const EulerVector& v);
EulerVector weierstrass_vector(const EllipticCurveQ& curve);

/// Number of zero entries.
std::size_t zero_count(const EulerVector& v) noexcept;

/// First N primes' worth of an L vector (N entries elliptic, 2N genus 2).
EulerVector truncate_vector(const EulerVector& v, int N);

enum class LabelSelector {
    rank,
    torsion_order,
    torsion_structure,
    integral_points,
    sha_order,
    sha_trivial,
    rational_points,
};

std::string_view label_selector_name(LabelSelector s) noexcept;
std::optional<LabelSelector> parse_label_selector(std::string_view name) noexcept;

/// Class name of a record under a selector, or nullopt when the label is absent.
/// Numbers print in decimal ("0", "4"); torsion structures as "C1", "C4", "C2xC2".
std::optional<std::string> label_value(const CurveRecord& record, LabelSelector selector);

/// Ascending numeric when both names are integers, lexicographic otherwise.
bool class_name_less(std::string_view a, std::string_view b) noexcept;

struct LabeledRow {
    std::vector<std::int64_t> features;
    std::size_t class_index = 0;
    std::string curve_label;

    friend bool operator==(const LabeledRow&, const LabeledRow&) = default;
};

struct LabeledDataset {
    std::size_t feature_dim = 0;
    std::vector<std::string> class_names;
    std::vector<LabeledRow> rows;

    std::size_t num_classes() const noexcept { return class_names.size(); }
    std::vector<std::size_t> class_counts() const;

    /// Throws std::invalid_argument if any row breaks the dataset invariants.
    void validate() const;
};

/// L vectors keyed by curve label. A stored vector serves any request for the
/// same kind with a smaller or equal N.
class VectorCache {
public:
    /// Vector of length matching (kind, N), truncated from a longer stored one.
    std::optional<EulerVector> find(const std::string& label, VectorKind kind, int N) const;

    /// Keeps whichever of the stored and offered vectors has the larger N.
    void insert(EulerVector v);

    std::size_t size() const noexcept { return entries_.size(); }

    /// Entries in ascending label order.
    std::vector<EulerVector> sorted_entries() const;

private:
    std::unordered_map<std::string, EulerVector> entries_;
};

/// L vector of a record at N, from the cache when it has one.
EulerVector l_vector(const CurveRecord& record, int N, const VectorCache* cache = nullptr);

/// Feature vector of the requested kind for a record.
EulerVector feature_vector(const CurveRecord& record, VectorKind kind, int N, const VectorCache* cache = nullptr);

struct FeatureOptions {
    unsigned workers = 1;
    /// Consulted for L vectors; newly computed vectors are added after the
    /// parallel phase.
    VectorCache* cache = nullptr;
    /// Fixed class order. When empty, the distinct labels present, sorted by
    /// class_name_less. Records whose label is not listed are an error.
    std::vector<std::string> class_names;
};

/// One row per record, in input order. Throws InputError naming the first
/// curve that lacks the selected label.
LabeledDataset build_dataset(std::span<const CurveRecord> records, LabelSelector selector, VectorKind kind, int N,
                             const FeatureOptions& options = {});

} // namespace curveml
