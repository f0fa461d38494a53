#include <doctest.h>

#include <cmath>

#include "property_runner.hpp"
#include "support.hpp"
#include "symfun/error.hpp"
#include "symfun/traces.hpp"

using namespace symfun;
using namespace testing_support;

namespace {

double value_at(const LimitBracket& b, double index) {
    for (const auto& [i, v] : b.series)
        if (i == index) return v;
    FAIL("index not in series");
    return 0;
}

StepFn harmonic_head(long n) {
    std::vector<Rational> v;
    for (long k = 1; k <= n; ++k) v.push_back(Rational(1) / k);
    return to_stepfn(RSeq(v));
}

}  // namespace

TEST_CASE("schedules") {
    CHECK(parse_m_schedule("2:4") == std::vector<unsigned long>{2, 4, 8, 16});
    CHECK(parse_m_schedule("10:2") == std::vector<unsigned long>{10, 100});
    CHECK_THROWS_AS(parse_m_schedule("1:5"), Error);
    CHECK_THROWS_AS(parse_m_schedule("2"), Error);
    auto ns = parse_n_schedule("1e2:1e4");
    CHECK(ns.front() == 100);
    CHECK(ns.back() == 10000);
}

TEST_CASE("dilation functional on a truncated harmonic sequence") {
    // sigma_m x has partial sums m H_n at t = m n; so the value is max_n H_n / ln(1 + m n).
    const long n = 10000;
    const double m = 1024;
    double oracle = 0, h = 0;
    for (long k = 1; k <= n; ++k) {
        h += 1.0 / k;
        oracle = std::max(oracle, h / std::log1p(m * k));
    }
    LimitBracket b = pi_estimate(harmonic_head(n), NormSpec::parse("marc:log1p"), parse_m_schedule("2:10"));
    CHECK(value_at(b, m) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(value_at(b, m) == doctest::Approx(0.60635).epsilon(1e-4));
}

TEST_CASE("dilation functional on finitely supported input") {
    LimitBracket b = pi_estimate(rseq({"1"}), NormSpec::parse("marc:log1p"), parse_m_schedule("2:10"));
    for (const auto& [m, v] : b.series) CHECK(v == doctest::Approx(1.0 / std::log1p(m)).epsilon(1e-12));
    for (std::size_t i = 1; i < b.series.size(); ++i) CHECK(b.series[i].second < b.series[i - 1].second);
}

TEST_CASE("dilation functional from closed-form generators") {
    LimitBracket harm = pi_estimate(SeqGenerator::harmonic(), NormSpec::parse("marc:log1p"), parse_m_schedule("2:12"));
    CHECK(value_at(harm, 1024) >= 0.95);
    CHECK(value_at(harm, 4096) >= 0.9);
    CHECK(value_at(harm, 4096) <= 1.0 + 1e-9);
    LimitBracket root = pi_estimate(SeqGenerator::psi_derivative(Psi::power(0.5)), NormSpec::parse("marc:pow:0.5"),
                                    parse_m_schedule("2:12"));
    for (const auto& [m, v] : root.series) CHECK(v == doctest::Approx(1.0 / std::sqrt(m)).epsilon(1e-9));
}

TEST_CASE("p estimate") {
    NormSpec spec = NormSpec::parse("marc:log1p");
    auto zero = p_estimate(fn({{"1", "1"}}), fn({{"1", "1"}}), spec, parse_m_schedule("2:4"));
    for (const auto& [m, v] : zero.series) CHECK(v == 0.0);

    // 1/t on a geometric grid of ratio 4. p and pi agree only as m grows; at fixed m the
    // gap closes as the horizon moves out.
    auto profile = [](int cells) {
        std::vector<Rational> b{Rational(1)}, v{Rational(1)};
        Rational left = 1;
        for (int j = 1; j < cells; ++j) {
            b.push_back(left * 4);
            v.push_back(1 / (left * 4));
            left *= 4;
        }
        return StepFn(b, v);
    };
    double previous = INFINITY;
    for (int cells : {20, 60, 100}) {
        StepFn x = profile(cells);
        double p = p_estimate(x.as_signed(), spec, {1024}).series.front().second;
        double pi = pi_estimate(x, spec, {1024}).series.front().second;
        double gap = std::abs(p - pi) / pi;
        INFO("cells ", cells, " gap ", gap);
        CHECK(gap < previous);
        previous = gap;
    }
    CHECK(previous <= 0.05);
}

TEST_CASE("p estimate of a difference of equimeasurable functions decays like 1/ln m") {
    StepFn u = fn({{"1", "3"}, {"3", "1"}, {"4", "2"}});
    StepFn v = fn({{"1", "2"}, {"2", "3"}, {"4", "1"}});
    SignedStep x = u.as_signed() - v.as_signed();
    for (const char* text : {"marc:log1p", "l1", "sup"}) {
        NormSpec spec = NormSpec::parse(text);
        double hardy = hardy_norm(x, spec, x.horizon());
        auto p = p_estimate(x, spec, parse_m_schedule("2:10"));
        for (const auto& [m, value] : p.series) {
            INFO(text, " m=", m);
            CHECK(value <= 2 * hardy / std::log(m) * (1 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("Dixmier means") {
    auto ns = parse_n_schedule("1e2:1e5");
    LimitBracket harm = dixmier_bracket(SeqGenerator::harmonic(), Psi::log1p(), ns);
    double h = 0;
    for (long k = 1; k <= 100000; ++k) h += 1.0 / k;  // direct summation oracle
    CHECK(harm.series.back().second == doctest::Approx(h / std::log1p(1e5)).epsilon(1e-10));
    CHECK(harm.series.back().second == doctest::Approx(1.0501).epsilon(5e-4 / 1.0501));

    LimitBracket geo = dixmier_bracket(SeqGenerator::geometric(0.5), Psi::log1p(), parse_n_schedule("1e2:1e8"));
    CHECK(geo.series.back().second < 0.06);
    CHECK(geo.series.back().second < geo.series.front().second);

    LimitBracket ind = dixmier_bracket(SeqGenerator::indicator(1000), Psi::identity(), {10, 1000, 1e5});
    CHECK(ind.series[0].second == doctest::Approx(1.0));
    CHECK(ind.series[1].second == doctest::Approx(1.0));
    CHECK(ind.series[2].second == doctest::Approx(0.01));
}

TEST_CASE("brackets") {
    LimitBracket b = make_bracket({{1, 5.0}, {2, 1.0}, {3, 1.02}, {4, 1.01}});
    CHECK(b.liminf_est == doctest::Approx(1.01));
    CHECK(b.limsup_est == doctest::Approx(1.02));
    CHECK(b.converged);
    CHECK(b.cesaro >= b.liminf_est);
    CHECK(b.cesaro <= b.limsup_est);
}

TEST_CASE("weight criterion") {
    CriterionResult log = criterion(Psi::log1p(), 1e6);
    CHECK(log.positive);
    CHECK(log.decreasing);
    CHECK(log.profile.min == doctest::Approx(std::log(2 * 1e6 + 1) / std::log(1e6 + 1)).epsilon(1e-12));
    CriterionResult root = criterion(Psi::power(0.5), 1e6);
    CHECK_FALSE(root.positive);
    CHECK(root.profile.min == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CriterionResult id = criterion(Psi::identity(), 1e6);
    CHECK_FALSE(id.positive);
    CHECK(id.profile.min == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("Hardy diagnostic") {
    std::vector<Rational> ws;
    for (int k = 1; k <= 20; ++k) ws.push_back(pow(Rational(2), k));

    FkResult same = fk_diagnostic(fn({{"1", "2"}, {"3", "1"}}), fn({{"1", "2"}, {"3", "1"}}), NormSpec::l1(), ws);
    for (const auto& [w, v] : same.series) CHECK(v == 0.0);
    CHECK(same.verdict == "likely in Z_E");

    FkResult compact = fk_diagnostic(StepFn::indicator(1), StepFn::indicator(2, q(1, 2)), NormSpec::l1(), ws);
    CHECK(compact.total == 0);
    CHECK(compact.verdict == "likely in Z_E");
    // Cx = 1/2 on (0, 1], 1/t - 1/2 on (1, 2], zero beyond
    CHECK(compact.series.back().second == doctest::Approx(0.5 + (std::log(2.0) - 0.5)).epsilon(1e-12));

    FkResult indicator = fk_diagnostic(StepFn::indicator(1).as_signed(), NormSpec::l1(), ws);
    CHECK(indicator.verdict == "diverges");
    for (const auto& [w, v] : indicator.series) CHECK(v == doctest::Approx(1 + std::log(w)).epsilon(0.01));
}

TEST_CASE("trace properties") {
    expect_properties({"pi-convexity", "pi-dilation", "p-below-norm", "dixmier-trace-class"}, 40);
}
