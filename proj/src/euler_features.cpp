#include "curveml/euler_features.hpp"

#include "curveml/error.hpp"
#include "curveml/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace curveml {

namespace {

constexpr std::pair<VectorKind, std::string_view> kKindNames[] = {
    {VectorKind::l_elliptic, "L_elliptic"}, {VectorKind::l_genus2, "L_genus2"}, {VectorKind::binary, "binary"},
    {VectorKind::ternary, "ternary"},       {VectorKind::weierstrass, "weierstrass"},
};

constexpr std::pair<LabelSelector, std::string_view> kSelectorNames[] = {
    {LabelSelector::rank, "rank"},
    {LabelSelector::torsion_order, "torsion_order"},
    {LabelSelector::torsion_structure, "torsion_structure"},
    {LabelSelector::integral_points, "integral_points"},
    {LabelSelector::sha_order, "sha_order"},
    {LabelSelector::sha_trivial, "sha_trivial"},
    {LabelSelector::rational_points, "rational_points"},
};

void require_positive_n(int N) {
    if (N < 1) throw std::invalid_argument("number of primes must be positive, got " + std::to_string(N));
}

std::optional<long long> as_integer(std::string_view s) noexcept {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string format_sha(double v) {
    const double r = std::round(v);
    if (std::fabs(v - r) < 1e-6) return std::to_string(static_cast<long long>(r));
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

EulerVector map_entries(const EulerVector& v, VectorKind to, std::int64_t (*f)(std::int64_t)) {
    if (v.kind != VectorKind::l_elliptic)
        throw std::invalid_argument(std::string(vector_kind_name(to)) + " vectors are built from L_elliptic vectors, got " +
                                    std::string(vector_kind_name(v.kind)));
    EulerVector out{v.curve_label, to, v.N, {}};
    out.values.reserve(v.values.size());
    for (auto a : v.values) out.values.push_back(f(a));
    return out;
}

} // namespace

std::string_view vector_kind_name(VectorKind kind) noexcept {
    for (auto [k, name] : kKindNames)
        if (k == kind) return name;
    return "unknown";
}

std::optional<VectorKind> parse_vector_kind(std::string_view name) noexcept {
    for (auto [k, n] : kKindNames)
        if (n == name) return k;
    return std::nullopt;
}

std::size_t EulerVector::expected_length(VectorKind kind, int N) noexcept {
    switch (kind) {
    case VectorKind::l_genus2: return 2 * static_cast<std::size_t>(N);
    case VectorKind::weierstrass: return 5;
    default: return static_cast<std::size_t>(N);
    }
}

void EulerVector::validate() const {
    if (N < 1) throw InputError("vector for " + curve_label + ": N must be positive");
    const std::size_t want = expected_length(kind, N);
    if (values.size() != want)
        throw InputError("vector for " + curve_label + ": expected " + std::to_string(want) + " entries for " +
                         std::string(vector_kind_name(kind)) + " N=" + std::to_string(N) + ", got " +
                         std::to_string(values.size()));
    auto in = [&](std::int64_t lo, std::int64_t hi) {
        return std::all_of(values.begin(), values.end(), [&](auto v) { return v >= lo && v <= hi; });
    };
    if (kind == VectorKind::binary && !in(0, 1)) throw InputError("binary vector for " + curve_label + " has entries outside {0,1}");
    if (kind == VectorKind::ternary && !in(-1, 1))
        throw InputError("ternary vector for " + curve_label + " has entries outside {-1,0,1}");
}

std::vector<std::uint32_t> nth_primes(int N, bool skip_two) {
    require_positive_n(N);
    const std::size_t count = static_cast<std::size_t>(N) + (skip_two ? 1 : 0);
    const double n = static_cast<double>(count);
    std::size_t bound = count < 6 ? 15 : static_cast<std::size_t>(n * (std::log(n) + std::log(std::log(n)))) + 10;
    std::vector<bool> composite(bound + 1, false);
    std::vector<std::uint32_t> primes;
    primes.reserve(count);
    for (std::size_t i = 2; i <= bound && primes.size() < count; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::size_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    if (skip_two) primes.erase(primes.begin());
    return primes;
}

EulerVector euler_vector_elliptic(const EllipticCurveQ& curve, int N) {
    EulerVector v{curve.label, VectorKind::l_elliptic, N, {}};
    const auto primes = nth_primes(N);
    v.values.reserve(primes.size());
    for (auto p : primes) v.values.push_back(ap_elliptic(curve, p));
    return v;
}

EulerVector euler_vector_genus2(const Genus2CurveQ& curve, int N) {
    EulerVector v{curve.label, VectorKind::l_genus2, N, {}};
    const auto primes = nth_primes(N, true);
    v.values.reserve(2 * primes.size());
    for (auto p : primes) {
        const auto e = euler_pair_genus2(curve, p);
        v.values.push_back(e.a1);
        v.values.push_back(e.a2);
    }
    return v;
}

EulerVector binary_vector(const EulerVector& v) {
    return map_entries(v, VectorKind::binary, [](std::int64_t a) -> std::int64_t { return a != 0 ? 1 : 0; });
}

EulerVector ternary_vector(const EulerVector& v) {
    return map_entries(v, VectorKind::ternary, [](std::int64_t a) -> std::int64_t { return (a > 0) - (a < 0); });
}

EulerVector weierstrass_vector(const EllipticCurveQ& curve) {
    curve.validate();
    const auto e4 = curve.e4.to_int64();
    const auto e5 = curve.e5.to_int64();
    if (!e4 || !e5) throw InputError("Weierstrass coefficients of " + curve.label + " exceed the 64-bit range");
    return {curve.label, VectorKind::weierstrass, 1, {curve.e1, curve.e2, curve.e3, *e4, *e5}};
}

std::size_t zero_count(const EulerVector& v) noexcept {
    return static_cast<std::size_t>(std::count(v.values.begin(), v.values.end(), 0));
}

EulerVector truncate_vector(const EulerVector& v, int N) {
    require_positive_n(N);
    if (v.kind == VectorKind::weierstrass) throw std::invalid_argument("Weierstrass vectors have no prime index");
    if (N > v.N)
        throw std::invalid_argument("cannot extend a vector for " + v.curve_label + " from N=" + std::to_string(v.N) +
                                    " to N=" + std::to_string(N));
    EulerVector out{v.curve_label, v.kind, N, {}};
    const auto len = static_cast<std::ptrdiff_t>(EulerVector::expected_length(v.kind, N));
    out.values.assign(v.values.begin(), v.values.begin() + len);
    return out;
}

std::string_view label_selector_name(LabelSelector s) noexcept {
    for (auto [k, name] : kSelectorNames)
        if (k == s) return name;
    return "unknown";
}

std::optional<LabelSelector> parse_label_selector(std::string_view name) noexcept {
    for (auto [k, n] : kSelectorNames)
        if (n == name) return k;
    return std::nullopt;
}

std::optional<std::string> label_value(const CurveRecord& record, LabelSelector selector) {
    const CurveLabels& l = record.labels;
    switch (selector) {
    case LabelSelector::rank: return std::to_string(l.rank);
    case LabelSelector::torsion_order: return std::to_string(l.torsion_order);
    case LabelSelector::torsion_structure: {
        if (l.torsion_structure.empty()) {
            if (l.torsion_order == 1) return std::string("C1");
            return std::nullopt;
        }
        std::string name;
        for (std::size_t i = 0; i < l.torsion_structure.size(); ++i) {
            if (i) name += 'x';
            name += 'C' + std::to_string(l.torsion_structure[i]);
        }
        return name;
    }
    case LabelSelector::integral_points:
        if (!l.num_integral_points) return std::nullopt;
        return std::to_string(*l.num_integral_points);
    case LabelSelector::rational_points:
        if (!l.num_rational_points) return std::nullopt;
        return std::to_string(*l.num_rational_points);
    case LabelSelector::sha_order:
        if (!l.sha_analytic_order) return std::nullopt;
        return format_sha(*l.sha_analytic_order);
    case LabelSelector::sha_trivial:
        if (l.sha_is_trivial) return std::string(*l.sha_is_trivial ? "1" : "0");
        if (l.sha_analytic_order) return std::string(std::fabs(*l.sha_analytic_order - 1.0) < 1e-6 ? "1" : "0");
        return std::nullopt;
    }
    return std::nullopt;
}

bool class_name_less(std::string_view a, std::string_view b) noexcept {
    const auto x = as_integer(a), y = as_integer(b);
    if (x && y) return *x < *y;
    return a < b;
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
    std::vector<std::size_t> counts(class_names.size(), 0);
    for (const auto& r : rows) ++counts.at(r.class_index);
    return counts;
}

void LabeledDataset::validate() const {
    for (const auto& r : rows) {
        if (r.class_index >= class_names.size())
            throw std::invalid_argument("row " + r.curve_label + ": class index out of range");
        if (r.features.size() != feature_dim)
            throw std::invalid_argument("row " + r.curve_label + ": feature length " + std::to_string(r.features.size()) +
                                        " != " + std::to_string(feature_dim));
    }
}

std::optional<EulerVector> VectorCache::find(const std::string& label, VectorKind kind, int N) const {
    auto it = entries_.find(label);
    if (it == entries_.end() || it->second.kind != kind || it->second.N < N) return std::nullopt;
    if (it->second.N == N) return it->second;
    return truncate_vector(it->second, N);
}

void VectorCache::insert(EulerVector v) {
    auto it = entries_.find(v.curve_label);
    if (it == entries_.end()) {
        std::string key = v.curve_label;
        entries_.emplace(std::move(key), std::move(v));
    } else if (it->second.kind != v.kind || it->second.N < v.N) {
        it->second = std::move(v);
    }
}

std::vector<EulerVector> VectorCache::sorted_entries() const {
    std::vector<EulerVector> out;
    out.reserve(entries_.size());
    for (const auto& [_, v] : entries_) out.push_back(v);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.curve_label < b.curve_label; });
    return out;
}

EulerVector l_vector(const CurveRecord& record, int N, const VectorCache* cache) {
    const VectorKind kind = record.family() == CurveFamily::elliptic ? VectorKind::l_elliptic : VectorKind::l_genus2;
    if (cache)
        if (auto hit = cache->find(record.label(), kind, N)) return *std::move(hit);
    if (kind == VectorKind::l_elliptic) return euler_vector_elliptic(record.elliptic(), N);
    return euler_vector_genus2(record.genus2(), N);
}

namespace {

void require_family(const CurveRecord& record, VectorKind kind) {
    const bool want_genus2 = kind == VectorKind::l_genus2;
    if (want_genus2 != (record.family() == CurveFamily::genus2))
        throw InputError(std::string(vector_kind_name(kind)) + " vectors are not defined for curve " + record.label());
}

EulerVector from_l_vector(EulerVector l, VectorKind kind) {
    if (kind == VectorKind::binary) return binary_vector(l);
    if (kind == VectorKind::ternary) return ternary_vector(l);
    return l;
}

} // namespace

EulerVector feature_vector(const CurveRecord& record, VectorKind kind, int N, const VectorCache* cache) {
    require_family(record, kind);
    if (kind == VectorKind::weierstrass) return weierstrass_vector(record.elliptic());
    return from_l_vector(l_vector(record, N, cache), kind);
}

LabeledDataset build_dataset(std::span<const CurveRecord> records, LabelSelector selector, VectorKind kind, int N,
                             const FeatureOptions& options) {
    require_positive_n(N);
    LabeledDataset ds;
    ds.feature_dim = EulerVector::expected_length(kind, N);

    std::vector<std::string> names(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto v = label_value(records[i], selector);
        if (!v)
            throw InputError("curve " + records[i].label() + " has no " + std::string(label_selector_name(selector)) +
                             " label");
        names[i] = std::move(*v);
    }

    if (!options.class_names.empty()) {
        ds.class_names = options.class_names;
    } else {
        std::set<std::string, decltype([](const std::string& a, const std::string& b) { return class_name_less(a, b); })>
            distinct(names.begin(), names.end());
        ds.class_names.assign(distinct.begin(), distinct.end());
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t c = 0; c < ds.class_names.size(); ++c) index.emplace(ds.class_names[c], c);

    const VectorCache* cache = options.cache;
    const VectorKind l_kind = kind == VectorKind::l_genus2 ? VectorKind::l_genus2 : VectorKind::l_elliptic;
    std::vector<std::optional<EulerVector>> fresh(records.size());
    ds.rows.resize(records.size());
    parallel_for(records.size(), options.workers, [&](std::size_t i) {
        const CurveRecord& r = records[i];
        auto it = index.find(names[i]);
        if (it == index.end())
            throw InputError("curve " + r.label() + " has class '" + names[i] + "' outside the configured classes");
        require_family(r, kind);
        EulerVector v;
        if (kind == VectorKind::weierstrass) {
            v = weierstrass_vector(r.elliptic());
        } else if (auto hit = cache ? cache->find(r.label(), l_kind, N) : std::nullopt) {
            v = from_l_vector(*std::move(hit), kind);
        } else {
            EulerVector l = l_vector(r, N, nullptr);
            fresh[i] = l;
            v = from_l_vector(std::move(l), kind);
        }
        ds.rows[i] = LabeledRow{std::move(v.values), it->second, r.label()};
    });

    if (options.cache)
        for (auto& v : fresh)
            if (v) options.cache->insert(std::move(*v));
    return ds;
}

} // namespace curveml
