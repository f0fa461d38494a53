#include <doctest.h>

#include <cmath>

#include "property_runner.hpp"
#include "support.hpp"
#include "symfun/averaging.hpp"
#include "symfun/error.hpp"
#include "symfun/majorization.hpp"

using namespace symfun;
using namespace testing_support;

namespace {

double simpson(const SmoothEval& f, double a, double b, int n = 20000) {
    double h = (b - a) / n, acc = f.value(a) + f.value(b);
    for (int i = 1; i < n; ++i) acc += f.value(a + i * h) * (i % 2 ? 4 : 2);
    return acc * h / 3;
}

}  // namespace

TEST_CASE("expectation examples") {
    CHECK(same_function(expectation(StepFn::indicator(1, 2), Partition(qs({"2"}))), StepFn::indicator(2)));
    StepFn flat = StepFn::indicator(5, q(3, 2));
    for (auto nodes : {qs({"1"}), qs({"1/2", "3"}), qs({"2", "5"}), std::vector<Rational>{}})
        CHECK(same_function(expectation(flat, Partition(nodes)), flat));
    StepFn x = to_stepfn(rseq({"4", "2", "0", "0"}));
    CHECK(same_function(expectation(x, Partition(qs({"2", "4"}))), to_stepfn(rseq({"3", "3", "0", "0"}))));
}

TEST_CASE("expectation beyond the last node") {
    StepFn x = fn({{"1", "4"}, {"2", "2"}, {"5", "1"}});
    Partition part(qs({"2"}));
    CHECK(same_function(expectation(x, part, Beyond::Keep), fn({{"2", "3"}, {"5", "1"}})));
    CHECK(same_function(expectation(x, part, Beyond::Drop), fn({{"2", "3"}})));
    CHECK(same_function(expectation(x, Partition(), Beyond::Drop).as_signed(), SignedStep()));
}

TEST_CASE("Hardy operator") {
    SmoothEval c = hardy(StepFn::indicator(1));
    CHECK(c.value(0.5) == doctest::Approx(1.0));
    CHECK(c.value(1.0) == doctest::Approx(1.0));
    CHECK(c.value(4.0) == doctest::Approx(0.25));
    CHECK(hardy(StepFn::indicator(1, 0)).value(3.0) == doctest::Approx(0.0));
    SmoothEval d = hardy(sfn({{"1", "1"}, {"2", "-1"}}));
    for (double t : {0.25, 1.0, 1.5, 1.9, 2.0, 3.0, 10.0}) {
        double want = t <= 1 ? 1.0 : t <= 2 ? (2 - t) / t : 0.0;
        CHECK(d.value(t) == doctest::Approx(want).epsilon(1e-14));
    }
    CHECK(hardy_value(sfn({{"1", "1"}, {"2", "-1"}}), q(3, 2)) == q(1, 3));
    CHECK_THROWS_AS(c.value(0.0), Error);
}

TEST_CASE("logarithmic mean") {
    SmoothEval m2 = m_avg(StepFn::indicator(1), 2);
    CHECK(m2.value(1.0) == doctest::Approx(0.5 / std::log(2.0)).epsilon(1e-14));
    CHECK(m2.value(1.0) == doctest::Approx(0.721348).epsilon(1e-6));
    CHECK(m_avg(StepFn::indicator(1, 0), 3).value(2.0) == doctest::Approx(0.0));
    // log-kernel closed form: (1/ln 2) int_{1/2}^1 ln(2s) ds = (ln 2 - 1/2) / ln 2
    double closed = (std::log(2.0) - 0.5) / std::log(2.0);
    CHECK(m2.integral(q(1), q(2)) == doctest::Approx(closed).epsilon(1e-13));
    CHECK(m2.integral(q(1), q(2)) == doctest::Approx(0.278652).epsilon(1e-6));
    CHECK(simpson(m2, 1.0, 2.0) == doctest::Approx(closed).epsilon(1e-10));
}

TEST_CASE("log mean value and integral against direct oracles") {
    Rng rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        StepFn x = gen_stepfn(rng, Profile::Generic, 6);
        unsigned m = 2 + trial % 4;
        SmoothEval f = m_avg(x, m);
        double reach = to_double(x.horizon()) * m * 1.5;
        for (int j = 1; j <= 30; ++j) {
            Rational t = from_double(reach * j / 30);
            double want = to_double(x.integral(t) - x.integral(t / m)) / (to_double(t) * std::log(double(m)));
            CHECK(f.value(t) == doctest::Approx(want).epsilon(1e-12));
        }
        double a = reach / 7, b = reach * 0.9;
        CHECK(f.integral(from_double(a), from_double(b)) == doctest::Approx(simpson(f, a, b)).epsilon(1e-7));
    }
}

TEST_CASE("node positions") {
    ANodes lin = a_nodes(StepFn::indicator(4), 1);
    REQUIRE(lin.nodes.size() == 4);
    CHECK(*lin.at(0) == 1);
    CHECK(*lin.at(1) == q(3, 2));
    CHECK(*lin.at(2) == q(9, 4));
    CHECK(*lin.at(3) == q(27, 8));
    ANodes empty = a_nodes(StepFn::indicator(4), 5);
    CHECK(empty.nodes.empty());
    CHECK(empty.below_theta);
    ANodes two = a_nodes(fn({{"1", "1"}, {"3", "1/2"}}), 1);
    CHECK(*two.at(0) == 1);
    CHECK(*two.at(1) == 2);
    // flat stretch: the smallest solution
    ANodes flat = a_nodes(fn({{"1", "1"}, {"5", "0"}}), 1);
    CHECK(*flat.at(0) == 1);
}

TEST_CASE("B nodes") {
    StepFn lin = StepFn::indicator(1000);
    CHECK(build_B(lin, KappaSeq::constant(2, -2, 3), 1).partition.empty());
    CHECK(build_B(lin, KappaSeq::parse("inf,inf,inf"), 1).partition.empty());
    StepFn tailed = fn({{"1", "1"}, {"500", "1/100"}});
    NodeSet b = build_B(tailed, KappaSeq::parse("2"), 1);
    CHECK(b.partition.nodes() == qs({"2"}));
    CHECK(b.indices == std::vector<int>{0});
}

TEST_CASE("A_m nodes") {
    StepFn lin = StepFn::indicator(1000);
    CHECK(build_A_m(lin, 2).partition.empty());
    NodeSet all = build_A_m(lin, 1);
    ANodes a = a_nodes(lin, 1);
    CHECK(all.partition.size() == a.nodes.size() - 1);
    Rng rng(9);
    int nonempty = 0;
    for (int trial = 0; trial < 20; ++trial)
        nonempty += !build_A_m(gen_stepfn(rng, Profile::SlowGrowth, 12, true), 2).partition.empty();
    CHECK(nonempty > 10);
}

TEST_CASE("kappa sequences") {
    KappaSeq k = KappaSeq::parse("2,5,9");
    CHECK(kappa_truncate(k, 4) == KappaSeq::parse("inf,5,9"));
    CHECK(kappa_truncate(k, 2) == k);
    CHECK(kappa_truncate(k, 10) == KappaSeq::parse("inf,inf,inf"));
    KappaSeq u = KappaSeq::parse("2,2,∞,5", -1);
    CHECK(u.n_min() == -1);
    CHECK(u.at(-1) == 2);
    CHECK_FALSE(u.at(1).has_value());
    CHECK(u.at(2) == 5);
    CHECK_FALSE(u.at(7).has_value());
    CHECK_THROWS_AS(KappaSeq::parse("2,x"), Error);
}

TEST_CASE("dyadic nodes") { CHECK(dyadic_partition(-1, 2).nodes() == qs({"1/2", "1", "2", "4"})); }

TEST_CASE("averaging properties, exact") {
    expect_properties({"expectation-contraction", "expectation-union", "majorant-three-halves",
                       "majorant-three-halves-weak", "growth-estimate", "growth-estimate-integrable",
                       "dilation-average", "unit-average-uniform", "differences-hardy-bound", "dyadic-identity"},
                      40);
}

TEST_CASE("averaging properties, conditional shift estimates") {
    expect_properties({"shift-estimate-30", "shift-estimate-45"}, 20);
}

TEST_CASE("averaging properties, float") {
    expect_properties({"log-mean-sandwich", "log-mean-uniform", "hardy-log-mean-monotone"}, 40);
}
