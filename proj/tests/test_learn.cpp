#include "curveml/error.hpp"
#include "curveml/learn/classifier.hpp"
#include "curveml/learn/forest.hpp"
#include "curveml/learn/logistic.hpp"
#include "curveml/learn/model_io.hpp"
#include "curveml/learn/naive_bayes.hpp"
#include "curveml/learn/split.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

using namespace curveml;
using namespace curveml::learn;

namespace {

LabeledDataset dataset(std::size_t dim, std::vector<std::string> names,
                       std::vector<std::pair<std::vector<std::int64_t>, std::size_t>> rows) {
    LabeledDataset ds;
    ds.feature_dim = dim;
    ds.class_names = std::move(names);
    for (std::size_t i = 0; i < rows.size(); ++i)
        ds.rows.push_back({std::move(rows[i].first), rows[i].second, "r" + std::to_string(i)});
    return ds;
}

LabeledDataset sized(std::vector<std::size_t> sizes) {
    LabeledDataset ds;
    ds.feature_dim = 1;
    std::size_t id = 0;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        ds.class_names.push_back(std::to_string(c));
        for (std::size_t i = 0; i < sizes[c]; ++i, ++id)
            ds.rows.push_back({{static_cast<std::int64_t>(id)}, c, "r" + std::to_string(id)});
    }
    return ds;
}

/// Three noisy Gaussian-ish blobs in `dim` integer dimensions.
LabeledDataset blobs(std::size_t per_class, std::size_t classes, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 3.0);
    LabeledDataset ds;
    ds.feature_dim = dim;
    for (std::size_t c = 0; c < classes; ++c) ds.class_names.push_back("k" + std::to_string(c));
    std::size_t id = 0;
    for (std::size_t c = 0; c < classes; ++c)
        for (std::size_t i = 0; i < per_class; ++i) {
            LabeledRow r;
            for (std::size_t j = 0; j < dim; ++j)
                r.features.push_back(static_cast<std::int64_t>(std::lround(noise(rng) + ((j + c) % classes) * 4.0)));
            r.class_index = c;
            r.curve_label = "b" + std::to_string(id++);
            ds.rows.push_back(std::move(r));
        }
    return ds;
}

std::vector<std::size_t> counts(const LabeledDataset& ds) { return ds.class_counts(); }

LabeledDataset permute_features(const LabeledDataset& ds, const std::vector<std::size_t>& perm) {
    auto out = ds;
    for (auto& r : out.rows) {
        std::vector<std::int64_t> f(perm.size());
        for (std::size_t j = 0; j < perm.size(); ++j) f[j] = r.features[perm[j]];
        r.features = std::move(f);
    }
    return out;
}

} // namespace

TEST_CASE("balance_classes") {
    CHECK(counts(balance_classes(sized({100, 40}), 1)) == std::vector<std::size_t>{40, 40});
    const auto bal = sized({50, 50});
    const auto b = balance_classes(bal, 2);
    CHECK(counts(b) == std::vector<std::size_t>{50, 50});
    std::multiset<std::string> before, after;
    for (const auto& r : bal.rows) before.insert(r.curve_label);
    for (const auto& r : b.rows) after.insert(r.curve_label);
    CHECK(before == after);
    CHECK(counts(balance_classes(sized({30, 20, 10}), 3)) == std::vector<std::size_t>{10, 10, 10});
    CHECK(counts(balance_classes(sized({30, 20, 10}), 3, 4)) == std::vector<std::size_t>{4, 4, 4});
    CHECK(balance_classes(sized({30, 20}), 9).rows == balance_classes(sized({30, 20}), 9).rows);
    CHECK_THROWS_AS(balance_classes(sized({10, 0}), 1), InputError);
    CHECK_THROWS_AS(balance_classes(sized({10}), 1), InputError);
}

TEST_CASE("stratified split") {
    SplitConfig cfg;
    cfg.seed = 5;
    const auto tv = split(sized({50, 50}), cfg);
    CHECK(tv.train.rows.size() == 80);
    CHECK(tv.validation.rows.size() == 20);

    const auto again = split(sized({50, 50}), cfg);
    CHECK(tv.train.rows == again.train.rows);
    CHECK(tv.validation.rows == again.validation.rows);

    cfg.train_fraction = 0.5;
    const auto half = split(sized({10, 10}), cfg);
    CHECK(counts(half.train) == std::vector<std::size_t>{5, 5});
    CHECK(counts(half.validation) == std::vector<std::size_t>{5, 5});

    CHECK_THROWS_AS(split(sized({10, 1}), cfg), InputError);
    cfg.train_fraction = 1.0;
    CHECK_THROWS_AS(split(sized({10, 10}), cfg), InputError);
}

TEST_CASE("balance then split keeps train and validation disjoint") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto tv = split(balance_classes(sized({70, 33, 51}), seed), SplitConfig{0.8, seed, true});
        std::set<std::string> train;
        for (const auto& r : tv.train.rows) train.insert(r.curve_label);
        for (const auto& r : tv.validation.rows) REQUIRE(train.count(r.curve_label) == 0);
        CHECK(tv.train.rows.size() + tv.validation.rows.size() == 99);
    }
}

TEST_CASE("Gaussian naive Bayes") {
    const auto ds = dataset(1, {"a", "b"}, {{{-10}, 0}, {{-9}, 0}, {{9}, 1}, {{10}, 1}});
    const auto m = train_gaussian_nb(ds);
    CHECK(predict_nb(m, std::vector<std::int64_t>{-8}) == 0);
    CHECK(predict_nb(m, std::vector<std::int64_t>{8}) == 1);
    CHECK(predict_nb(m, std::vector<std::int64_t>{0}) == 0);  // exact midpoint, equal priors
    CHECK(std::fabs(m.priors[0] + m.priors[1] - 1.0) < 1e-12);
    for (const auto& vs : m.variances)
        for (double v : vs) CHECK(v >= m.epsilon);
    CHECK(m.epsilon > 0);

    // constant feature: the variance floor keeps the density finite
    const auto flat = dataset(1, {"a", "b"}, {{{3}, 0}, {{3}, 0}, {{3}, 1}, {{3}, 1}});
    const auto fm = train_gaussian_nb(flat);
    CHECK(fm.epsilon == doctest::Approx(1e-9));
    CHECK(predict_nb(fm, std::vector<std::int64_t>{3}) == 0);

    CHECK_THROWS_AS(train_gaussian_nb(dataset(1, {"a", "b"}, {{{1}, 0}})), InputError);
}

TEST_CASE("categorical naive Bayes") {
    const auto ds = dataset(2, {"odd", "even"},
                            {{{1, 3}, 0}, {{-1, 5}, 0}, {{3, 1}, 0}, {{2, 4}, 1}, {{0, -2}, 1}, {{4, 2}, 1}});
    const auto m = train_categorical_nb(ds);
    CHECK(predict_nb(m, std::vector<std::int64_t>{1, 5}) == 0);
    CHECK(predict_nb(m, std::vector<std::int64_t>{2, -2}) == 1);
    // neither value was seen: both classes share the unseen slot and equal priors
    CHECK(predict_nb(m, std::vector<std::int64_t>{99, 99}) == 0);
    CHECK_THROWS_AS(train_categorical_nb(ds, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(predict_nb(m, std::vector<std::int64_t>{1}), std::invalid_argument);
}

TEST_CASE("argmax ties go to the lowest index") {
    CHECK(argmax_lowest(std::vector<double>{1.0, 3.0, 3.0}) == 1);
    CHECK(argmax_lowest(std::vector<double>{-1.0, -1.0}) == 0);
}

TEST_CASE("naive Bayes is invariant under feature permutation") {
    const auto ds = blobs(40, 3, 6, 11);
    const std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
    const auto pds = permute_features(ds, perm);
    const auto g = train_gaussian_nb(ds), pg = train_gaussian_nb(pds);
    const auto c = train_categorical_nb(ds), pc = train_categorical_nb(pds);
    const auto probe = blobs(20, 3, 6, 12);
    const auto pprobe = permute_features(probe, perm);
    for (std::size_t i = 0; i < probe.rows.size(); ++i) {
        CHECK(predict_nb(g, probe.rows[i].features) == predict_nb(pg, pprobe.rows[i].features));
        CHECK(predict_nb(c, probe.rows[i].features) == predict_nb(pc, pprobe.rows[i].features));
    }
}

TEST_CASE("logistic regression") {
    const auto ds = dataset(1, {"neg", "pos"}, {{{-1}, 0}, {{1}, 1}});
    const auto m = train_logistic(ds);
    CHECK(predict_logistic(m, std::vector<std::int64_t>{1}) == 1);
    CHECK(predict_logistic(m, std::vector<std::int64_t>{-1}) == 0);
    // the learned weight is positive, so scores increase with x
    const auto lo = m.decision(std::vector<std::int64_t>{0});
    const auto hi = m.decision(std::vector<std::int64_t>{2});
    CHECK(hi.back() > lo.back());

    const auto blob = blobs(50, 3, 4, 3);
    const auto mm = train_logistic(blob);
    std::size_t right = 0;
    for (const auto& r : blob.rows) right += predict_logistic(mm, r.features) == r.class_index;
    CHECK(static_cast<double>(right) / static_cast<double>(blob.rows.size()) > 0.9);
}

TEST_CASE("logistic regression with a huge penalty predicts the prior majority") {
    const auto ds = dataset(1, {"a", "b"}, {{{-3}, 0}, {{-1}, 1}, {{1}, 1}, {{3}, 1}, {{5}, 1}});
    LogisticHyper h;
    h.l2_lambda = 1e6;
    const auto m = train_logistic(ds, h);
    for (std::int64_t x : {-100, -3, 0, 3, 100}) CHECK(predict_logistic(m, std::vector<std::int64_t>{x}) == 1);
}

TEST_CASE("logistic gradient matches central differences") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t k : {2u, 4u}) {
        const std::size_t rows = 30, dim = 5;
        std::vector<double> x(rows * dim);
        for (auto& v : x) v = g(rng);
        std::vector<std::size_t> y(rows);
        for (std::size_t i = 0; i < rows; ++i) y[i] = i % k;
        const LogisticObjective obj(x, y, rows, dim, k, 0.05);
        std::vector<double> params(obj.num_params());
        for (auto& v : params) v = 0.5 * g(rng);
        std::vector<double> grad(obj.num_params());
        obj.evaluate(params, grad);
        for (std::size_t j = 0; j < params.size(); ++j) {
            const double h = 1e-6;
            auto plus = params, minus = params;
            plus[j] += h;
            minus[j] -= h;
            const double fd = (obj.evaluate(plus, {}) - obj.evaluate(minus, {})) / (2 * h);
            INFO("K=" << k << " j=" << j);
            CHECK(std::fabs(fd - grad[j]) <= 1e-5 * std::max(1.0, std::fabs(grad[j])));
        }
    }
}

TEST_CASE("logistic regression is invariant under feature permutation") {
    const auto ds = blobs(30, 3, 5, 21);
    const std::vector<std::size_t> perm{4, 2, 0, 3, 1};
    const auto m = train_logistic(ds);
    const auto pm = train_logistic(permute_features(ds, perm));
    const auto probe = blobs(15, 3, 5, 22);
    const auto pprobe = permute_features(probe, perm);
    for (std::size_t i = 0; i < probe.rows.size(); ++i)
        CHECK(predict_logistic(m, probe.rows[i].features) == predict_logistic(pm, pprobe.rows[i].features));
}

TEST_CASE("gini impurity") {
    CHECK(gini_impurity(std::vector<std::uint32_t>{7, 0}) == 0.0);
    CHECK(gini_impurity(std::vector<std::uint32_t>{5, 5}) == doctest::Approx(0.5));
    CHECK(gini_impurity(std::vector<std::uint32_t>{1, 1, 1}) == doctest::Approx(2.0 / 3.0));
    CHECK(gini_impurity(std::vector<std::uint32_t>{0, 0}) == 0.0);
}

TEST_CASE("random forest basics") {
    LabeledDataset ds;
    ds.feature_dim = 1;
    ds.class_names = {"lo", "hi"};
    for (int i = 0; i < 40; ++i) ds.rows.push_back({{i}, static_cast<std::size_t>(i >= 20), std::to_string(i)});
    const auto m = train_random_forest(ds);
    for (const auto& r : ds.rows) CHECK(predict_forest(m, r.features) == r.class_index);
    CHECK(m.trees.size() == 100);
    CHECK(m.features_per_split == 1);

    LabeledDataset skew = ds;
    for (int i = 0; i < 10; ++i) skew.rows.push_back({{100 + i}, 1, "x" + std::to_string(i)});
    ForestHyper stump;
    stump.max_depth = 0;
    const auto s = train_random_forest(skew, stump);
    for (std::int64_t x : {-5, 0, 10, 30, 200}) CHECK(predict_forest(s, std::vector<std::int64_t>{x}) == 1);
    for (const auto& t : s.trees) CHECK(t.depth() == 0);
}

TEST_CASE("random forest trees respect the depth cap and have non-empty leaves") {
    const auto ds = blobs(60, 3, 9, 4);
    ForestHyper h;
    h.num_trees = 12;
    h.max_depth = 3;
    const auto m = train_random_forest(ds, h);
    CHECK(m.features_per_split == 3);
    for (const auto& t : m.trees) {
        CHECK(t.depth() <= 3);
        for (const auto& n : t.nodes)
            if (n.feature < 0) {
                std::uint64_t total = 0;
                for (std::size_t k = 0; k < 3; ++k) total += t.histograms.at(n.hist_offset + k);
                CHECK(total > 0);
            }
    }
}

TEST_CASE("random forest is deterministic across runs and worker counts") {
    const auto ds = blobs(50, 3, 8, 9);
    ForestHyper h;
    h.num_trees = 20;
    h.seed = 42;
    const auto a = train_random_forest(ds, h, 1);
    const auto b = train_random_forest(ds, h, 1);
    const auto c = train_random_forest(ds, h, 4);
    CHECK(a.trees == b.trees);
    CHECK(a.trees == c.trees);
    h.seed = 43;
    CHECK_FALSE(train_random_forest(ds, h, 1).trees == a.trees);
}

TEST_CASE("classifier front end") {
    for (auto k : {ClassifierKind::naive_bayes, ClassifierKind::gaussian_nb, ClassifierKind::logistic,
                   ClassifierKind::forest})
        CHECK(parse_classifier(classifier_name(k)) == k);
    CHECK(classifier_name(ClassifierKind::naive_bayes) == "nb");
    CHECK_FALSE(parse_classifier("svm"));

    const auto train = blobs(40, 3, 4, 30);
    const auto test = blobs(20, 3, 4, 31);
    for (auto k : {ClassifierKind::naive_bayes, ClassifierKind::gaussian_nb, ClassifierKind::logistic,
                   ClassifierKind::forest}) {
        const auto m = train_classifier(k, train);
        CHECK(m.feature_dim() == 4);
        const auto cm = evaluate(m, test, 2);
        CHECK(cm.total() == test.rows.size());
        CHECK(cm.trace() > test.rows.size() / 2);
        CHECK(cm.counts == evaluate(m, test, 1).counts);
        CHECK_THROWS_AS(predict(m, std::vector<std::int64_t>{1, 2}), std::invalid_argument);
    }
    auto reordered = test;
    std::swap(reordered.class_names[0], reordered.class_names[1]);
    CHECK_THROWS_AS(evaluate(train_classifier(ClassifierKind::naive_bayes, train), reordered), std::invalid_argument);

    LabeledDataset empty;
    empty.feature_dim = 1;
    empty.class_names = {"a", "b"};
    CHECK_THROWS_AS(train_classifier(ClassifierKind::forest, empty), InputError);
    CHECK_THROWS_AS(train_classifier(ClassifierKind::logistic, sized({3})), InputError);
}

TEST_CASE("models round-trip through the text format exactly") {
    const auto train = blobs(30, 3, 5, 50);
    const auto probe = blobs(10, 3, 5, 51);
    TrainOptions opt;
    opt.forest.num_trees = 7;
    for (auto k : {ClassifierKind::naive_bayes, ClassifierKind::gaussian_nb, ClassifierKind::logistic,
                   ClassifierKind::forest}) {
        const auto m = train_classifier(k, train, opt);
        const auto text = model_to_string(m);
        const auto back = model_from_string(text);
        CHECK(back.kind == m.kind);
        CHECK(back.class_names == m.class_names);
        CHECK(model_to_string(back) == text);
        for (const auto& r : probe.rows) CHECK(predict(back, r.features) == predict(m, r.features));
        if (k == ClassifierKind::logistic) {
            const auto& a = std::get<LogisticModel>(m.state);
            const auto& b = std::get<LogisticModel>(back.state);
            CHECK(a.params == b.params);
            CHECK(a.mean == b.mean);
            CHECK(a.scale == b.scale);
        }
        if (k == ClassifierKind::forest)
            CHECK(std::get<ForestModel>(m.state).trees == std::get<ForestModel>(back.state).trees);
    }
}

TEST_CASE("malformed model text is rejected with a line number") {
    const auto good = model_to_string(train_classifier(ClassifierKind::gaussian_nb, blobs(10, 2, 2, 1)));
    CHECK_THROWS_WITH_AS(model_from_string("nonsense\n"), doctest::Contains("line 1"), InputError);
    CHECK_THROWS_AS(model_from_string(""), InputError);
    CHECK_THROWS_AS(model_from_string(good.substr(0, good.size() / 2)), InputError);
    std::string bad_kind = good;
    bad_kind.replace(bad_kind.find("nb-gaussian"), 11, "nb-gaussiaX");
    CHECK_THROWS_WITH_AS(model_from_string(bad_kind), doctest::Contains("line 2"), InputError);
    std::string no_end = good;
    no_end.erase(no_end.rfind("end"));
    CHECK_THROWS_AS(model_from_string(no_end), InputError);
}
