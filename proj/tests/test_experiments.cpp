#include "curveml/error.hpp"
#include "curveml/experiments.hpp"

#include "support/fixtures.hpp"
#include "support/synthetic.hpp"

#include <doctest.h>

#include <set>

using namespace curveml;

namespace {

ExperimentConfig shrunk(const std::string& name, int N) {
    auto c = *find_experiment(name);
    c.N = N;
    return c;
}

} // namespace

TEST_CASE("catalog contents") {
    const auto cat = builtin_catalog();
    std::set<std::string> names;
    for (const auto& c : cat) {
        CHECK_NOTHROW(c.validate());
        names.insert(c.name);
    }
    CHECK(names.size() == cat.size());
    for (const char* n : {"T1a", "T1b", "T1c", "T1d", "T1e", "T2", "T3", "T4", "T5", "T6", "T7", "T8a", "T8b", "T9",
                          "W5", "B4", "Te4"})
        CHECK(names.count(n) == 1);

    const auto t1e = *find_experiment("T1e");
    CHECK(t1e.extrapolation());
    CHECK(t1e.train_range == ConductorRange{1, 10'000});
    CHECK(t1e.validation_range == ConductorRange{20'001, 30'000});
    CHECK(t1e.N == 300);
    CHECK(t1e.classifier == learn::ClassifierKind::logistic);

    const auto t6 = *find_experiment("T6");
    CHECK(t6.class_filter == std::vector<std::string>{"0", "1", "2"});
    CHECK(t6.family == CurveFamily::genus2);
    CHECK(t6.N == 200);

    const auto t3 = *find_experiment("T3");
    CHECK(t3.classifier == learn::ClassifierKind::forest);
    CHECK(t3.validation_range.hi == 1'000'000);
    CHECK(find_experiment("W5")->kind == VectorKind::weierstrass);
    CHECK_FALSE(find_experiment("T10"));
}

TEST_CASE("config validation") {
    auto c = *find_experiment("T2");
    c.class_filter = {"1"};
    CHECK_THROWS_AS(c.validate(), InputError);
    c = *find_experiment("T2");
    c.train_range = {10, 5};
    CHECK_THROWS_AS(c.validate(), InputError);
    c = *find_experiment("T1e");
    c.validation_range = {5'000, 25'000};
    CHECK_THROWS_AS(c.validate(), InputError);
    c = *find_experiment("T6");
    c.kind = VectorKind::l_elliptic;
    CHECK_THROWS_AS(c.validate(), InputError);
}

TEST_CASE("experiment runs are disjoint, consistent and deterministic") {
    const auto recs = synthetic::elliptic_records(160, 1);
    for (const char* name : {"T1a", "T1e", "T2", "T3", "B4", "W5"}) {
        const auto cfg = shrunk(name, 12);
        RunOptions one;
        const auto a = run_experiment(cfg, recs, one);
        RunOptions many;
        many.workers = 3;
        VectorCache cache;
        many.cache = &cache;
        const auto b = run_experiment(cfg, recs, many);
        CHECK(a.render() == b.render());
        CHECK(a.confusion.total() == a.validation_counts[0] + a.validation_counts[1]);
        CHECK(a.precision == doctest::Approx(precision(a.confusion)));
        CHECK(a.train_counts[0] == a.train_counts[1]);
        CHECK(a.render().find("experiment=" + std::string(name) + "\n") == 0);
        auto other = cfg;
        other.split.seed = 99;
        CHECK(run_experiment(other, recs, one).render() != a.render());
    }
}

TEST_CASE("classifier override and genus-2 runs") {
    const auto recs = synthetic::genus2_records(fixtures::genus2());
    RunOptions opt;
    opt.classifier = learn::ClassifierKind::forest;
    const auto r = run_experiment(shrunk("T6", 6), recs, opt);
    CHECK(r.config.classifier == learn::ClassifierKind::forest);
    CHECK(r.confusion.size() == 3);
    CHECK(r.available == std::vector<std::uint64_t>{5, 5, 4});
    CHECK(r.render().find("classifier=forest\n") != std::string::npos);
    CHECK(run_experiment(shrunk("T8a", 4), recs).confusion.size() == 7);
}

TEST_CASE("experiment input errors") {
    const auto recs = synthetic::elliptic_records(40, 2);
    auto cfg = shrunk("T1e", 5);
    cfg.validation_range = {900'000, 1'000'000};
    CHECK_THROWS_WITH_AS(run_experiment(cfg, recs), doctest::Contains("no validation curves"), InputError);

    CHECK_THROWS_WITH_AS(run_experiment(shrunk("T6", 5), recs), doctest::Contains("genus 2"), InputError);

    cfg = shrunk("T2", 5);
    cfg.class_filter = {"1", "7"};
    CHECK_THROWS_WITH_AS(run_experiment(cfg, recs), doctest::Contains("'7'"), InputError);

    auto dup = recs;
    dup.push_back(recs.front());
    CHECK_THROWS_WITH_AS(run_experiment(shrunk("T2", 5), dup), doctest::Contains("repeats"), InputError);
}

TEST_CASE("zero-count study on hand-checked vectors") {
    // 11a: a_p for p = 2, 3, 5, 7, 11, 13 is -2, -1, 1, -2, 1, 4, so no zeros.
    // y^2 = x^3 + x has a_p = 0 at every p = 3 mod 4 (3, 7, 11) and at 2.
    EllipticCurveQ k11a;
    k11a.label = "11a";
    k11a.e2 = 1;
    k11a.e3 = -1;
    k11a.e4 = -10;
    k11a.e5 = -20;
    EllipticCurveQ cm;
    cm.label = "cm";
    cm.e4 = 1;
    std::vector<CurveRecord> recs{{k11a, {}}, {cm, {}}, {cm, {}}};
    recs[0].labels.num_integral_points = 0;
    recs[1].labels.num_integral_points = 1;
    std::get<EllipticCurveQ>(recs[2].curve).label = "cm2";
    recs[2].labels.num_integral_points = 3;  // ignored

    const auto s = zero_count_study(recs, 6, 2);
    CHECK(s.no_integral_points.mean == 0.0);
    CHECK(s.one_integral_point.mean == 4.0);
    CHECK(s.one_integral_point.std == 0.0);
    CHECK(s.histogram_csv() == "bin,F0,F1\n0,1,0\n4,0,1\n");
    CHECK(s.render().find("F1.mean=4\n") != std::string::npos);

    recs[1].labels.num_integral_points = 0;
    CHECK_THROWS_AS(zero_count_study(recs, 6), InputError);
}

TEST_CASE("synthetic parity: more coordinates separate better") {
    const auto one = synthetic_parity_experiment(1, 400, 3);
    const auto many = synthetic_parity_experiment(100, 400, 3);
    CHECK(one.nb_accuracy < many.nb_accuracy);
    CHECK(many.nb_accuracy >= 0.99);
    CHECK(one.train_rows + one.validation_rows == 800);
    CHECK(synthetic_parity_experiment(20, 200, 8, 1).render() == synthetic_parity_experiment(20, 200, 8, 3).render());
}

TEST_CASE("coefficient sweep") {
    const auto recs = synthetic::elliptic_records(80, 4);
    const std::vector<int> Ns{1, 2, 5};
    const auto pts = coefficient_sweep(*find_experiment("T4"), recs, Ns);
    REQUIRE(pts.size() == 3);
    CHECK(pts[2].N == 5);
    for (const auto& p : pts) CHECK((p.precision >= 0.0 && p.precision <= 1.0));
    CHECK_THROWS_AS(coefficient_sweep(*find_experiment("W5"), recs, Ns), InputError);
}
