#include <doctest.h>

#include <optional>
#include <random>

#include "property_runner.hpp"
#include "support.hpp"
#include "symfun/averaging.hpp"
#include "symfun/majorization.hpp"

using namespace symfun;
using namespace testing_support;

namespace {

// Direct brute force of sum_{k=ma+1}^b y_k <= sum_{k=a+1}^b x_k on zero-padded arrays.
std::optional<unsigned> brute_witness(const RSeq& y, const RSeq& x, unsigned m_max) {
    std::size_t len = std::max(y.size(), x.size()) * m_max + 1;
    auto padded = [&](const RSeq& s) {
        std::vector<Rational> pre{Rational(0)};
        for (std::size_t k = 0; k < len; ++k) pre.push_back(pre.back() + (k < s.size() ? s[k] : Rational(0)));
        return pre;
    };
    auto py = padded(y), px = padded(x);
    for (unsigned m = 1; m <= m_max; ++m) {
        bool ok = true;
        for (std::size_t a = 0; ok && m * a < len; ++a)
            for (std::size_t b = m * a + 1; ok && b <= len; ++b)
                ok = py[b] - py[m * a] <= px[b] - px[a];
        if (ok) return m;
    }
    return std::nullopt;
}

RSeq random_seq(std::mt19937_64& rng, std::size_t max_len) {
    std::uniform_int_distribution<int> len(1, static_cast<int>(max_len)), val(0, 6);
    std::vector<Rational> v;
    for (int k = len(rng); k > 0; --k) v.emplace_back(val(rng));
    std::sort(v.begin(), v.end(), std::greater<>());
    return RSeq(v);
}

}  // namespace

TEST_CASE("submajorization examples") {
    MajorizationReport ok = submajorize(rseq({"2", "1"}), rseq({"3", "0"}));
    CHECK(ok.verdict);
    CHECK(ok.margin == 0);
    MajorizationReport bad = submajorize(rseq({"3", "0"}), rseq({"2", "2"}));
    CHECK_FALSE(bad.verdict);
    REQUIRE(bad.first_violation.has_value());
    CHECK(bad.first_violation->b == 1);
    CHECK(bad.margin < 0);
}

TEST_CASE("pair averages are majorized") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        RSeq x = random_seq(rng, 9);
        RSeq avg = dilate(sigma_half(x), 2);
        CHECK(submajorize(avg, x).verdict);
    }
}

TEST_CASE("function verdict agrees with a dense grid") {
    Rng rng(11);
    for (int trial = 0; trial < 150; ++trial) {
        StepFn y = gen_stepfn(rng, Profile::Generic, 6);
        StepFn x = gen_stepfn(rng, Profile::Generic, 6);
        StepFn my = rearrange(y), mx = rearrange(x);
        Rational reach = max(my.horizon(), mx.horizon());
        bool dense = true;
        for (int j = 1; j <= 400; ++j) {
            Rational t = reach * j / 400;
            dense = dense && my.integral(t) <= mx.integral(t);
        }
        bool verdict = submajorize(y, x).verdict;
        // the grid can miss a violation between its points, never invent one
        if (verdict) CHECK(dense);
        auto grid = merge_breakpoints(my.breakpoints(), mx.breakpoints());
        bool at_breaks = true;
        for (const auto& t : grid) at_breaks = at_breaks && my.integral(t) <= mx.integral(t);
        CHECK(verdict == at_breaks);
    }
}

TEST_CASE("uniform submajorization examples") {
    CHECK(uniform_submajorize(rseq({"1", "1"}), rseq({"2", "0"}), 8).witness == 2u);
    RSeq x = rseq({"4", "2", "1"});
    CHECK(uniform_submajorize(x, x, 8).witness == 1u);
    UniformReport none = uniform_submajorize(rseq({"1", "1", "1"}), rseq({"1", "1", "0"}), 64);
    CHECK_FALSE(none.witness.has_value());
    CHECK_FALSE(none.report.verdict);
}

TEST_CASE("uniform witness agrees with brute force") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        RSeq y = random_seq(rng, 5), x = random_seq(rng, 5);
        CHECK(uniform_submajorize(y, x, 6).witness == brute_witness(y, x, 6));
    }
}

TEST_CASE("function uniform submajorization reduces to dilations") {
    StepFn x = fn({{"1", "3"}, {"2", "1"}});
    // (1/2) sigma_2 x sits below x with shift 2
    StepFn y = scale(dilate(x, Rational(2)), q(1, 2));
    CHECK(uniform_submajorize(y, x, 4).witness == 2u);
    CHECK(uniform_submajorize(x, x, 4).witness == 1u);
}

TEST_CASE("shifted integral check") {
    SignedStep p = sfn({{"1", "1"}});
    SignedStep q2 = sfn({{"2", "1"}});
    CHECK(shifted_integral_check(p, q2, Rational(1), Rational(1)).verdict);
    CHECK_FALSE(shifted_integral_check(q2, p, Rational(1), Rational(1)).verdict);
}

TEST_CASE("majorization properties") {
    expect_properties({"uniform-implies-submajor", "submajor-preorder", "pointwise-submajor", "submajor-scaling"});
}
