#include "curveml/experiments.hpp"

#include "curveml/error.hpp"
#include "curveml/parallel.hpp"
#include "curveml/report_format.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

namespace curveml {

namespace {

using learn::ClassifierKind;

// splitmix64 finalizer: independent streams for the steps of one run.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum SeedTag : std::uint64_t { balance_tag, balance_validation_tag, split_tag, forest_tag };

std::string join(const std::vector<std::string>& v, char sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += v[i];
    }
    return out;
}

template <class T>
std::string join_counts(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

ExperimentConfig make(std::string name, std::string description, CurveFamily family, LabelSelector selector,
                      std::vector<std::string> classes, VectorKind kind, int N, ConductorRange train,
                      ConductorRange validation, ClassifierKind classifier, std::size_t target) {
    ExperimentConfig c;
    c.name = std::move(name);
    c.description = std::move(description);
    c.family = family;
    c.selector = selector;
    c.class_filter = std::move(classes);
    c.kind = kind;
    c.N = N;
    c.train_range = train;
    c.validation_range = validation;
    c.classifier = classifier;
    c.per_class_target = target;
    return c;
}

// Labels only: one row per record index, features left empty.
LabeledDataset label_rows(std::span<const CurveRecord> records, std::span<const std::size_t> picked,
                          const ExperimentConfig& cfg, const std::map<std::string, std::size_t>& class_index) {
    LabeledDataset ds;
    ds.class_names = cfg.class_filter;
    for (auto i : picked) {
        LabeledRow row;
        row.class_index = class_index.at(*label_value(records[i], cfg.selector));
        row.curve_label = records[i].label();
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

LabeledDataset with_features(const LabeledDataset& labels, const std::unordered_map<std::string, std::size_t>& by_label,
                             std::span<const CurveRecord> records, const ExperimentConfig& cfg,
                             const RunOptions& options) {
    std::vector<CurveRecord> chosen;
    chosen.reserve(labels.rows.size());
    for (const auto& row : labels.rows) chosen.push_back(records[by_label.at(row.curve_label)]);
    FeatureOptions fo;
    fo.workers = options.workers;
    fo.cache = options.cache;
    fo.class_names = cfg.class_filter;
    auto ds = build_dataset(chosen, cfg.selector, cfg.kind, cfg.N, fo);
    return ds;
}

void require_every_class(const LabeledDataset& ds, const std::string& side, const ExperimentConfig& cfg) {
    const auto counts = ds.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] == 0)
            throw InputError("experiment " + cfg.name + ": no " + side + " curves in class '" + ds.class_names[c] +
                             "'");
}

} // namespace

std::string ConductorRange::to_string() const { return std::to_string(lo) + ".." + std::to_string(hi); }

void ExperimentConfig::validate() const {
    const auto where = "experiment " + name + ": ";
    if (name.empty()) throw InputError("experiment name is empty");
    if (class_filter.size() < 2) throw InputError(where + "needs at least 2 classes");
    if (std::set<std::string>(class_filter.begin(), class_filter.end()).size() != class_filter.size())
        throw InputError(where + "class names repeat");
    if (N < 1) throw InputError(where + "N must be positive");
    for (const auto* r : {&train_range, &validation_range})
        if (r->lo < 1 || r->hi < r->lo) throw InputError(where + "conductor range " + r->to_string() + " is empty");
    if (extrapolation() && train_range.overlaps(validation_range))
        throw InputError(where + "distinct train and validation ranges must not overlap");
    const bool genus2_kind = kind == VectorKind::l_genus2;
    if ((family == CurveFamily::genus2) != genus2_kind)
        throw InputError(where + "vector kind " + std::string(vector_kind_name(kind)) + " does not fit the curve family");
    split.validate();
    if (per_class_target && *per_class_target < 2) throw InputError(where + "per-class target must be at least 2");
}

std::vector<ExperimentConfig> builtin_catalog() {
    using CF = CurveFamily;
    using LS = LabelSelector;
    using VK = VectorKind;
    const ConductorRange low{1, 10'000}, high{20'001, 30'000};
    const ConductorRange to3e4{1, 30'000}, to5e4{1, 50'000}, to1e6{1, 1'000'000};
    const std::vector<std::string> rank01{"0", "1"}, tors12{"1", "2"}, ip01{"0", "1"}, sha49{"4", "9"};
    std::vector<ExperimentConfig> c{
        make("T1a", "elliptic rank 0 vs 1", CF::elliptic, LS::rank, rank01, VK::l_elliptic, 100, low, low,
             ClassifierKind::logistic, 16'000),
        make("T1b", "elliptic rank 0 vs 1", CF::elliptic, LS::rank, rank01, VK::l_elliptic, 300, low, low,
             ClassifierKind::logistic, 16'000),
        make("T1c", "elliptic rank 0 vs 1", CF::elliptic, LS::rank, rank01, VK::l_elliptic, 300, high, high,
             ClassifierKind::logistic, 17'000),
        make("T1d", "elliptic rank 0 vs 1", CF::elliptic, LS::rank, rank01, VK::l_elliptic, 500, high, high,
             ClassifierKind::logistic, 17'000),
        make("T1e", "elliptic rank 0 vs 1, trained on low conductors, validated on higher ones", CF::elliptic,
             LS::rank, rank01, VK::l_elliptic, 300, low, high, ClassifierKind::logistic, 17'000),
        make("T2", "elliptic torsion order 1 vs 2", CF::elliptic, LS::torsion_order, tors12, VK::l_elliptic, 500,
             to3e4, to3e4, ClassifierKind::naive_bayes, 37'500),
        make("T3", "elliptic torsion structure C2xC2 vs C4", CF::elliptic, LS::torsion_structure, {"C2xC2", "C4"},
             VK::l_elliptic, 500, to1e6, to1e6, ClassifierKind::forest, 5'400),
        make("T4", "elliptic integral points 0 vs 1", CF::elliptic, LS::integral_points, ip01, VK::l_elliptic, 500,
             to5e4, to5e4, ClassifierKind::naive_bayes, 32'000),
        make("B4", "elliptic integral points 0 vs 1 on zero/nonzero vectors", CF::elliptic, LS::integral_points, ip01,
             VK::binary, 500, to5e4, to5e4, ClassifierKind::naive_bayes, 32'000),
        make("Te4", "elliptic integral points 0 vs 1 on sign vectors", CF::elliptic, LS::integral_points, ip01,
             VK::ternary, 500, to5e4, to5e4, ClassifierKind::naive_bayes, 32'000),
        make("T5", "elliptic analytic Sha order 4 vs 9 (weak signal expected)", CF::elliptic, LS::sha_order, sha49,
             VK::l_elliptic, 500, to1e6, to1e6, ClassifierKind::naive_bayes, 28'000),
        make("W5", "elliptic analytic Sha order 4 vs 9 on Weierstrass coefficients (weak signal expected)",
             CF::elliptic, LS::sha_order, sha49, VK::weierstrass, 1, to1e6, to1e6, ClassifierKind::naive_bayes,
             28'000),
        make("T6", "genus 2 rank 0 vs 1 vs 2", CF::genus2, LS::rank, {"0", "1", "2"}, VK::l_genus2, 200, to1e6,
             to1e6, ClassifierKind::logistic, 12'100),
        make("T7", "genus 2 torsion order 1 vs 2", CF::genus2, LS::torsion_order, tors12, VK::l_genus2, 200, to1e6,
             to1e6, ClassifierKind::naive_bayes, 14'600),
        make("T8a", "genus 2 rational points 0..6 (weak signal expected)", CF::genus2, LS::rational_points,
             {"0", "1", "2", "3", "4", "5", "6"}, VK::l_genus2, 200, to1e6, to1e6, ClassifierKind::naive_bayes, 5'000),
        make("T8b", "genus 2 rational points 2 vs 4 (weak signal expected)", CF::genus2, LS::rational_points,
             {"2", "4"}, VK::l_genus2, 200, to1e6, to1e6, ClassifierKind::naive_bayes, 9'400),
        make("T9", "genus 2 trivial (1) vs nontrivial (0) Sha", CF::genus2, LS::sha_trivial, {"0", "1"},
             VK::l_genus2, 200, to1e6, to1e6, ClassifierKind::logistic, 42'000),
    };
    return c;
}

std::optional<ExperimentConfig> find_experiment(std::string_view name) {
    for (auto& c : builtin_catalog())
        if (c.name == name) return c;
    return std::nullopt;
}

std::string ExperimentReport::render() const {
    const auto& c = config;
    std::ostringstream out;
    out << "experiment=" << c.name << '\n'
        << "description=" << c.description << '\n'
        << "family=" << (c.family == CurveFamily::elliptic ? "elliptic" : "genus2") << '\n'
        << "label=" << label_selector_name(c.selector) << '\n'
        << "classes=" << join(c.class_filter, ',') << '\n'
        << "vector=" << vector_kind_name(c.kind) << '\n'
        << "N=" << c.N << '\n'
        << "train_range=" << c.train_range.to_string() << '\n'
        << "validation_range=" << c.validation_range.to_string() << '\n'
        << "mode=" << (c.extrapolation() ? "extrapolation" : "split") << '\n'
        << "classifier=" << learn::classifier_name(c.classifier) << '\n'
        << "seed=" << c.split.seed << '\n'
        << "train_fraction=" << format_real(c.split.train_fraction) << '\n'
        << "balance=" << (c.split.balance ? 1 : 0) << '\n'
        << "per_class_target=" << (c.per_class_target ? std::to_string(*c.per_class_target) : "none") << '\n'
        << "available=" << join_counts(available) << '\n'
        << "train_counts=" << join_counts(train_counts) << '\n'
        << "validation_counts=" << join_counts(validation_counts) << '\n'
        << "precision=" << format_real(precision) << '\n'
        << "mcc=" << format_real(mcc) << '\n';
    for (std::size_t t = 0; t < confusion.size(); ++t)
        out << "confusion." << confusion.class_names[t] << '=' << join_counts(confusion.counts[t]) << '\n';
    return out.str();
}

ExperimentReport run_experiment(const ExperimentConfig& cfg_in, std::span<const CurveRecord> records,
                                const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig cfg = cfg_in;
    if (options.classifier) cfg.classifier = *options.classifier;
    cfg.validate();
    const auto where = "experiment " + cfg.name + ": ";

    std::unordered_map<std::string, std::size_t> by_label;
    std::map<std::string, std::size_t> class_index;
    for (std::size_t c = 0; c < cfg.class_filter.size(); ++c) class_index.emplace(cfg.class_filter[c], c);

    std::vector<std::size_t> train_pick, validation_pick;
    std::size_t family_matches = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (!by_label.emplace(r.label(), i).second) throw InputError(where + "curve label " + r.label() + " repeats");
        if (r.family() != cfg.family) continue;
        ++family_matches;
        const auto v = label_value(r, cfg.selector);
        if (!v || !class_index.contains(*v)) continue;
        const auto q = r.conductor();
        if (cfg.train_range.contains(q)) train_pick.push_back(i);
        else if (cfg.extrapolation() && cfg.validation_range.contains(q)) validation_pick.push_back(i);
    }
    if (family_matches == 0)
        throw InputError(where + "needs " + (cfg.family == CurveFamily::elliptic ? "elliptic" : "genus 2") +
                         " curves, none given");

    const std::uint64_t seed = cfg.split.seed;
    auto train_labels = label_rows(records, train_pick, cfg, class_index);
    ExperimentReport report;
    report.available = [&] {
        auto a = train_labels.class_counts();
        if (cfg.extrapolation())
            for (auto i : validation_pick) ++a[class_index.at(*label_value(records[i], cfg.selector))];
        return std::vector<std::uint64_t>(a.begin(), a.end());
    }();

    LabeledDataset validation_labels;
    if (!cfg.extrapolation()) {
        require_every_class(train_labels, "", cfg);
        if (cfg.split.balance)
            train_labels = learn::balance_classes(train_labels, derive_seed(seed, balance_tag), cfg.per_class_target);
        learn::SplitConfig sc = cfg.split;
        sc.seed = derive_seed(seed, split_tag);
        auto tv = learn::split(train_labels, sc);
        train_labels = std::move(tv.train);
        validation_labels = std::move(tv.validation);
    } else {
        validation_labels = label_rows(records, validation_pick, cfg, class_index);
        if (validation_labels.rows.empty())
            throw InputError(where + "no validation curves with conductor in " + cfg.validation_range.to_string());
        require_every_class(train_labels, "training", cfg);
        require_every_class(validation_labels, "validation", cfg);
        if (cfg.split.balance) {
            train_labels = learn::balance_classes(train_labels, derive_seed(seed, balance_tag), cfg.per_class_target);
            validation_labels = learn::balance_classes(validation_labels, derive_seed(seed, balance_validation_tag),
                                                       cfg.per_class_target);
        }
    }

    const auto train = with_features(train_labels, by_label, records, cfg, options);
    const auto validation = with_features(validation_labels, by_label, records, cfg, options);

    learn::TrainOptions to = options.train;
    to.forest.seed = derive_seed(seed, forest_tag);
    to.workers = options.workers;
    const auto model = learn::train_classifier(cfg.classifier, train, to);

    report.config = cfg;
    const auto tc = train.class_counts(), vc = validation.class_counts();
    report.train_counts.assign(tc.begin(), tc.end());
    report.validation_counts.assign(vc.begin(), vc.end());
    report.confusion = learn::evaluate(model, validation, options.workers);
    report.precision = precision(report.confusion);
    report.mcc = mcc(report.confusion);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string ParityResult::render() const {
    std::ostringstream out;
    out << "experiment=synthetic-parity\n"
        << "train_rows=" << train_rows << '\n'
        << "validation_rows=" << validation_rows << '\n'
        << "nb_accuracy=" << format_real(nb_accuracy) << '\n'
        << "nb_gaussian_accuracy=" << format_real(gaussian_nb_accuracy) << '\n'
        << "forest_accuracy=" << format_real(forest_accuracy) << '\n';
    return out.str();
}

ParityResult synthetic_parity_experiment(int dim, std::size_t count_per_class, std::uint64_t seed, unsigned workers) {
    if (dim < 1) throw InputError("synthetic parity: dim must be positive");
    if (count_per_class < 2) throw InputError("synthetic parity: need at least 2 vectors per class");
    LabeledDataset ds;
    ds.feature_dim = static_cast<std::size_t>(dim);
    ds.class_names = {"uniform", "even"};
    std::mt19937_64 rng(derive_seed(seed, 100));
    std::uniform_int_distribution<int> wide(-10, 10), narrow(-5, 5);
    for (std::size_t cls = 0; cls < 2; ++cls)
        for (std::size_t i = 0; i < count_per_class; ++i) {
            LabeledRow row;
            row.class_index = cls;
            row.curve_label = (cls == 0 ? "u" : "e") + std::to_string(i);
            row.features.resize(ds.feature_dim);
            for (auto& x : row.features) x = cls == 0 ? wide(rng) : 2 * narrow(rng);
            ds.rows.push_back(std::move(row));
        }
    ds = learn::balance_classes(ds, derive_seed(seed, balance_tag));
    learn::SplitConfig sc;
    sc.seed = derive_seed(seed, split_tag);
    const auto tv = learn::split(ds, sc);

    learn::TrainOptions to;
    to.forest.seed = derive_seed(seed, forest_tag);
    to.workers = workers;
    const auto accuracy = [&](ClassifierKind kind) {
        return precision(learn::evaluate(learn::train_classifier(kind, tv.train, to), tv.validation, workers));
    };
    ParityResult r;
    r.train_rows = tv.train.rows.size();
    r.validation_rows = tv.validation.rows.size();
    r.nb_accuracy = accuracy(ClassifierKind::naive_bayes);
    r.gaussian_nb_accuracy = accuracy(ClassifierKind::gaussian_nb);
    r.forest_accuracy = accuracy(ClassifierKind::forest);
    return r;
}

std::string ZeroCountStudy::render() const {
    return render_summary(no_integral_points, "F0.") + render_summary(one_integral_point, "F1.");
}

std::string ZeroCountStudy::histogram_csv() const {
    const std::vector<CountSummary> s{no_integral_points, one_integral_point};
    const std::vector<std::string> names{"F0", "F1"};
    return curveml::histogram_csv(s, names);
}

ZeroCountStudy zero_count_study(std::span<const CurveRecord> records, int N, unsigned workers, VectorCache* cache) {
    std::vector<const CurveRecord*> picked;
    std::vector<int> group;
    for (const auto& r : records) {
        if (r.family() != CurveFamily::elliptic) continue;
        const auto& ip = r.labels.num_integral_points;
        if (!ip || (*ip != 0 && *ip != 1)) continue;
        picked.push_back(&r);
        group.push_back(static_cast<int>(*ip));
    }
    std::vector<EulerVector> vectors(picked.size());
    parallel_for(picked.size(), workers, [&](std::size_t i) { vectors[i] = l_vector(*picked[i], N, cache); });
    if (cache)
        for (const auto& v : vectors) cache->insert(v);
    std::vector<std::int64_t> zeros[2];
    for (std::size_t i = 0; i < vectors.size(); ++i)
        zeros[group[i]].push_back(static_cast<std::int64_t>(zero_count(vectors[i])));
    if (zeros[0].empty()) throw InputError("zero-count study: no elliptic curves without integral points");
    if (zeros[1].empty()) throw InputError("zero-count study: no elliptic curves with a single integral point");
    return {summarize_counts(zeros[0]), summarize_counts(zeros[1])};
}

std::vector<SweepPoint> coefficient_sweep(const ExperimentConfig& base, std::span<const CurveRecord> records,
                                          std::span<const int> Ns, const RunOptions& options) {
    if (base.kind != VectorKind::l_elliptic && base.kind != VectorKind::l_genus2)
        throw InputError("coefficient sweep needs an L-vector experiment");
    std::vector<SweepPoint> out;
    for (int n : Ns) {
        ExperimentConfig cfg = base;
        cfg.N = n;
        const auto r = run_experiment(cfg, records, options);
        out.push_back({n, r.precision, r.mcc});
    }
    return out;
}

} // namespace curveml
