#include "curveml/metrics.hpp"
#include "curveml/report_format.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

using namespace curveml;

namespace {

using Counts = std::vector<std::vector<std::uint64_t>>;

/// Pearson correlation between one-hot truth and one-hot prediction, computed
/// by expanding the matrix into individual samples.
double mcc_by_samples(const Counts& c) {
    const std::size_t k = c.size();
    std::vector<std::pair<std::size_t, std::size_t>> samples;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::uint64_t n = 0; n < c[i][j]; ++n) samples.emplace_back(i, j);
    const double s = static_cast<double>(samples.size());
    double xy = 0, xx = 0, yy = 0;
    for (std::size_t a = 0; a < k; ++a) {
        double mx = 0, my = 0;
        for (auto [t, p] : samples) {
            mx += t == a;
            my += p == a;
        }
        mx /= s;
        my /= s;
        for (auto [t, p] : samples) {
            const double dx = (t == a) - mx, dy = (p == a) - my;
            xy += dx * dy;
            xx += dx * dx;
            yy += dy * dy;
        }
    }
    if (xx == 0 || yy == 0) return 0.0;
    return xy / std::sqrt(xx * yy);
}

Counts permuted(const Counts& c, const std::vector<std::size_t>& perm) {
    Counts out(c.size(), std::vector<std::uint64_t>(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j) out[perm[i]][perm[j]] = c[i][j];
    return out;
}

} // namespace

TEST_CASE("precision examples") {
    CHECK(precision(ConfusionMatrix::from_counts({{10, 0}, {0, 10}})) == 1.0);
    CHECK(precision(ConfusionMatrix::from_counts({{5, 5}, {5, 5}})) == 0.5);
    CHECK(precision(ConfusionMatrix::from_counts({{40, 10}, {5, 45}})) == doctest::Approx(0.85).epsilon(1e-15));
    CHECK_THROWS_AS(precision(ConfusionMatrix::from_counts({{0, 0}, {0, 0}})), std::invalid_argument);
    CHECK_THROWS_AS(ConfusionMatrix::from_counts({{1, 2}}), std::invalid_argument);
}

TEST_CASE("mcc examples") {
    CHECK(mcc(ConfusionMatrix::from_counts({{10, 0}, {0, 10}})) == doctest::Approx(1.0));
    CHECK(mcc(ConfusionMatrix::from_counts({{7, 0, 0}, {0, 3, 0}, {0, 0, 9}})) == doctest::Approx(1.0));
    CHECK(mcc(ConfusionMatrix::from_counts({{10, 0}, {10, 0}})) == 0.0);
    CHECK(mcc(ConfusionMatrix::from_counts({{0, 4, 0}, {0, 6, 0}, {0, 2, 0}})) == 0.0);
    CHECK(mcc_binary(40, 45, 5, 10) == doctest::Approx(0.7035).epsilon(1e-4));
    CHECK(mcc(ConfusionMatrix::from_counts({{40, 10}, {5, 45}})) == doctest::Approx(0.7035).epsilon(1e-4));
    CHECK(mcc(ConfusionMatrix::from_counts({{0, 10}, {10, 0}})) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(mcc(ConfusionMatrix::from_counts({{0, 0}, {0, 0}})), std::invalid_argument);
}

TEST_CASE("binary and multiclass mcc agree on 2x2 matrices") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::uint64_t> d(0, 60);
    for (int i = 0; i < 200; ++i) {
        const Counts c{{d(rng), d(rng)}, {d(rng), d(rng)}};
        if (c[0][0] + c[0][1] + c[1][0] + c[1][1] == 0) continue;
        const auto cm = ConfusionMatrix::from_counts(c);
        CHECK(std::fabs(mcc_binary(c[0][0], c[1][1], c[1][0], c[0][1]) - mcc_multiclass(cm)) < 1e-12);
    }
}

TEST_CASE("multiclass mcc equals the one-hot correlation") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::uint64_t> d(0, 12);
    for (int i = 0; i < 50; ++i) {
        Counts c(3, std::vector<std::uint64_t>(3));
        for (auto& row : c)
            for (auto& v : row) v = d(rng);
        CHECK(mcc(ConfusionMatrix::from_counts(c)) == doctest::Approx(mcc_by_samples(c)).epsilon(1e-12));
    }
}

TEST_CASE("precision and mcc are invariant under relabeling") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::uint64_t> d(0, 30);
    for (int i = 0; i < 50; ++i) {
        Counts c(4, std::vector<std::uint64_t>(4));
        for (auto& row : c)
            for (auto& v : row) v = d(rng);
        std::vector<std::size_t> perm{0, 1, 2, 3};
        std::shuffle(perm.begin(), perm.end(), rng);
        const auto a = ConfusionMatrix::from_counts(c), b = ConfusionMatrix::from_counts(permuted(c, perm));
        CHECK(precision(a) == doctest::Approx(precision(b)).epsilon(1e-15));
        CHECK(mcc(a) == doctest::Approx(mcc(b)).epsilon(1e-12));
        CHECK((precision(a) == 1.0) == (a.trace() == a.total()));
    }
}

TEST_CASE("summarize_counts") {
    const std::vector<std::int64_t> five{5, 5, 5};
    auto s = summarize_counts(five);
    CHECK(s.mean == 5.0);
    CHECK(s.std == 0.0);
    CHECK(s.histogram == std::map<std::int64_t, std::uint64_t>{{5, 3}});
    const std::vector<std::int64_t> ends{0, 10};
    s = summarize_counts(ends);
    CHECK(s.mean == 5.0);
    CHECK(s.std == 5.0);
    const std::vector<std::int64_t> four{1, 2, 3, 4};
    s = summarize_counts(four);
    CHECK(s.mean == 2.5);
    CHECK(s.std == doctest::Approx(1.1180).epsilon(1e-4));
    CHECK_THROWS_AS(summarize_counts(std::vector<std::int64_t>{}), std::invalid_argument);
    CHECK(render_summary(s, "F0.") == "F0.count=4\nF0.mean=2.5\nF0.std=" + format_real(std::sqrt(1.25)) + "\n");
}

TEST_CASE("CSV outputs") {
    ConfusionMatrix cm({"a", "b"});
    cm.add(0, 0, 3);
    cm.add(0, 1);
    cm.add(1, 1, 2);
    CHECK(confusion_csv(cm) == "true\\predicted,a,b\na,3,1\nb,0,2\n");

    const std::vector<std::int64_t> x{1, 1, 3}, y{2, 3};
    const std::vector<CountSummary> sums{summarize_counts(x), summarize_counts(y)};
    const std::vector<std::string> names{"F0", "F1"};
    CHECK(histogram_csv(sums, names) == "bin,F0,F1\n1,2,0\n2,0,1\n3,1,1\n");
    CHECK_THROWS_AS(histogram_csv(sums, std::vector<std::string>{"F0"}), std::invalid_argument);
}

TEST_CASE("format_real round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 0.7035, 1e-300, 123456789.125, -2.5}) CHECK(std::stod(format_real(v)) == v);
    CHECK(format_real(-0.0) == "0");
    CHECK(format_real(0.85) == "0.85");
}
