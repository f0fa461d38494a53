#include <doctest.h>

#include "property_runner.hpp"
#include "support.hpp"
#include "symfun/error.hpp"

using namespace symfun;
using namespace testing_support;

TEST_CASE("rearrange sorts sequences") {
    CHECK(rearrange(seq({"1", "3", "2"})) == rseq({"3", "2", "1"}));
    CHECK(rearrange(seq({"0", "0"})) == rseq({"0", "0"}));
}

TEST_CASE("rearrange swaps two blocks") {
    StepFn r = rearrange(fn({{"1", "1"}, {"2", "3"}}));
    CHECK(r == fn({{"1", "3"}, {"2", "1"}}));
    CHECK(r.horizon() == 2);
}

TEST_CASE("rearrange of a signed function uses absolute values") {
    StepFn r = rearrange(sfn({{"1", "-2"}, {"3", "1"}, {"4", "-5"}}));
    CHECK(r == fn({{"1", "5"}, {"2", "2"}, {"4", "1"}}));
}

TEST_CASE("partial sums") {
    PartialSum exhausted = partial_sum(StepFn::indicator(1), 3);
    CHECK(exhausted.value == 1);
    CHECK(exhausted.truncated);
    CHECK(partial_sum(rseq({"1", "1/2", "1/3"}), 2).value == q(3, 2));
    CHECK(partial_sum(rseq({"1", "1/2"}), q(3, 2)).value == q(5, 4));
    CHECK_FALSE(partial_sum(rseq({"1", "1/2"}), q(3, 2)).truncated);
}

TEST_CASE("partial sum is concave for nonincreasing input") {
    StepFn x = fn({{"1/2", "5"}, {"2", "3"}, {"7/2", "1"}});
    for (int k = 1; k < 16; ++k) {
        Rational t = q(k, 4), h = q(1, 4);
        Rational mid = partial_sum(x, t).value;
        CHECK(2 * mid >= partial_sum(x, t - h).value + partial_sum(x, t + h).value);
    }
}

TEST_CASE("dilation") {
    CHECK(dilate(rseq({"1", "1/2"}), 2) == rseq({"1", "1", "1/2", "1/2"}));
    StepFn x = fn({{"1", "2"}, {"5/2", "1"}});
    CHECK(dilate(x, Rational(1)) == x);
    CHECK(same_function(dilate(StepFn::indicator(1), Rational(3)), StepFn::indicator(3)));
    for (const char* t : {"0", "1/3", "1", "2", "9/4", "10"})
        CHECK(partial_sum(dilate(x, Rational(5)), 5 * q(t)).value == 5 * partial_sum(x, q(t)).value);
}

TEST_CASE("sigma_half") {
    CHECK(sigma_half(seq({"4", "2", "2", "0"})) == seq({"3", "1"}));
    CHECK(sigma_half(seq({"7/3", "7/3"})) == seq({"7/3"}));
    CHECK(sigma_half(seq({"1", "0", "0", "0"})) == seq({"1/2", "0"}));
    CHECK(sigma_half(seq({"1", "1", "1"})) == seq({"1", "1/2"}));
}

TEST_CASE("head truncation") {
    CHECK(same_function(head_truncate(StepFn::indicator(2), 1), StepFn::indicator(1)));
    StepFn x = fn({{"1", "2"}, {"3", "1"}});
    CHECK(head_truncate(x, x.horizon()) == x);
    CHECK(head_truncate(rseq({"1", "1", "1"}), 2) == rseq({"1", "1", "0"}));
    CHECK_THROWS_AS(head_truncate(x, 0), Error);
}

TEST_CASE("direct sum") {
    CHECK(direct_sum(rseq({"1"}), rseq({"2"})) == rseq({"2", "1"}));
    RSeq x = rseq({"3", "1"});
    CHECK(direct_sum(x, RSeq{}) == x);
    CHECK(direct_sum(rseq({"1", "1"}), rseq({"1", "1"})) == dilate(rseq({"1", "1"}), 2));
    std::vector<RSeq> three{x, x, x};
    CHECK(direct_sum(three) == dilate(x, 3));
}

TEST_CASE("sequence and function views convert losslessly") {
    RSeq x = rseq({"5", "2", "2", "1/3"});
    CHECK(to_rseq(to_stepfn(x)) == x);
    CHECK_THROWS_AS(to_rseq(fn({{"1/2", "1"}})), Error);
}

TEST_CASE("validation errors") {
    CHECK_THROWS_AS(RSeq(qs({"1", "2"})), Error);
    CHECK_THROWS_AS(StepFn(qs({"1", "1"}), qs({"1", "1"})), Error);
    CHECK_THROWS_AS(StepFn(qs({"1"}), qs({"-1"})), Error);
    CHECK_THROWS_AS(Partition(qs({"2", "1"})), Error);
    CHECK_THROWS_AS(Partition(qs({"0", "1"})), Error);
}

TEST_CASE("distribution function") {
    StepFn x = fn({{"1", "1"}, {"3", "4"}, {"4", "2"}});
    CHECK(distribution(x, 0) == 4);
    CHECK(distribution(x, 1) == 3);
    CHECK(distribution(x, 2) == 2);
    CHECK(distribution(x, 4) == 0);
}

TEST_CASE("core properties") {
    expect_properties({"rearrange-idempotent", "rearrange-partial-sum", "dilation-partial-sum", "direct-sum-algebra"});
}
