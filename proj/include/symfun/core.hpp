#pragma once

// Ground types: finite sequences, their decreasing rearrangements, and
// right-closed piecewise-constant functions on (0, T]. All arithmetic is exact.

#include <cstddef>
#include <span>
#include <vector>

#include "symfun/rational.hpp"

namespace symfun {

/// Finite sequence of nonnegative rationals.
class Seq {
public:
    Seq() = default;
    explicit Seq(std::vector<Rational> values);

    const std::vector<Rational>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    const Rational& operator[](std::size_t k) const { return values_[k]; }

    bool operator==(const Seq&) const = default;

private:
    std::vector<Rational> values_;
};

/// Nonincreasing, nonnegative finite sequence: the desk model of a
/// singular-value sequence.
class RSeq {
public:
    RSeq() = default;
    /// Throws Error("invalid-input") unless values are nonnegative and nonincreasing.
    explicit RSeq(std::vector<Rational> values);

    const std::vector<Rational>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    const Rational& operator[](std::size_t k) const { return values_[k]; }

    bool operator==(const RSeq&) const = default;

private:
    std::vector<Rational> values_;
};

/// Piecewise-constant function with cells (b_{i-1}, b_i], b_0 = 0, extended by
/// zero beyond the horizon T = b_r. Values may have either sign. The empty
/// object is the zero function with horizon 0.
class SignedStep {
public:
    SignedStep() = default;
    SignedStep(std::vector<Rational> breakpoints, std::vector<Rational> values);

    const std::vector<Rational>& breakpoints() const noexcept { return breaks_; }
    const std::vector<Rational>& values() const noexcept { return values_; }
    std::size_t cell_count() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    Rational horizon() const { return breaks_.empty() ? Rational(0) : breaks_.back(); }
    /// Left end of cell i.
    Rational cell_left(std::size_t i) const { return i == 0 ? Rational(0) : breaks_[i - 1]; }
    Rational cell_length(std::size_t i) const { return breaks_[i] - cell_left(i); }

    /// Value on the cell (l, r] containing t (left-continuous); 0 for t > T.
    Rational value_at(const Rational& t) const;
    /// Value immediately to the right of t (right-continuous convention of mu(t, x)).
    Rational value_right(const Rational& t) const;
    /// Integral over (0, t], clamped at the horizon. Requires t >= 0.
    Rational integral(const Rational& t) const;
    Rational integral(const Rational& a, const Rational& b) const { return integral(b) - integral(a); }

    bool operator==(const SignedStep&) const = default;

private:
    std::vector<Rational> breaks_;
    std::vector<Rational> values_;
    std::vector<Rational> cumulative_;  // integral up to each breakpoint
};

/// Nonnegative step function on (0, T], T > 0. `tail` marks a truncated model
/// of a function that continues beyond T.
class StepFn {
public:
    StepFn(std::vector<Rational> breakpoints, std::vector<Rational> values, bool tail = false);
    /// Validates nonnegativity of a signed function. Empty input is rejected.
    static StepFn from_signed(SignedStep f, bool tail = false);
    /// height * chi_(0, length].
    static StepFn indicator(const Rational& length, const Rational& height = 1);

    const std::vector<Rational>& breakpoints() const noexcept { return f_.breakpoints(); }
    const std::vector<Rational>& values() const noexcept { return f_.values(); }
    std::size_t cell_count() const noexcept { return f_.cell_count(); }
    Rational horizon() const { return f_.horizon(); }
    Rational cell_left(std::size_t i) const { return f_.cell_left(i); }
    Rational cell_length(std::size_t i) const { return f_.cell_length(i); }
    Rational value_at(const Rational& t) const { return f_.value_at(t); }
    Rational value_right(const Rational& t) const { return f_.value_right(t); }
    Rational integral(const Rational& t) const { return f_.integral(t); }
    Rational integral(const Rational& a, const Rational& b) const { return f_.integral(a, b); }
    bool tail() const noexcept { return tail_; }
    bool is_nonincreasing() const;

    const SignedStep& as_signed() const noexcept { return f_; }

    bool operator==(const StepFn&) const = default;

private:
    StepFn(SignedStep f, bool tail) : f_(std::move(f)), tail_(tail) {}
    SignedStep f_;
    bool tail_ = false;
};

/// Strictly increasing list of positive nodes; cells are (0, p_1], (p_1, p_2], ...
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<Rational> nodes);

    const std::vector<Rational>& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }

    bool operator==(const Partition&) const = default;

private:
    std::vector<Rational> nodes_;
};

/// Union of node sets.
Partition merge(const Partition& a, const Partition& b);
/// The unit-cell partition {1, 2, ..., n}.
Partition unit_partition(std::size_t n);

struct PartialSum {
    Rational value;
    bool truncated = false;  ///< t was beyond the horizon and the result was clamped
};

// --- rearrangement ---------------------------------------------------------

/// Stable descending sort.
RSeq rearrange(const Seq& x);
RSeq rearrange(const RSeq& x);
/// Cells sorted by value (stable, descending), equal neighbours merged.
StepFn rearrange(const StepFn& x);
/// Decreasing rearrangement of |x|.
StepFn rearrange(const SignedStep& x);

/// measure{x > s}.
Rational distribution(const Seq& x, const Rational& s);
Rational distribution(const StepFn& x, const Rational& s);

// --- partial sums ----------------------------------------------------------

/// Sum over k <= floor(t) plus frac(t) * x_{ceil(t)}.
PartialSum partial_sum(const RSeq& x, const Rational& t);
PartialSum partial_sum(const StepFn& x, const Rational& t);

// --- dilations and averages ------------------------------------------------

/// Each entry repeated m times.
RSeq dilate(const RSeq& x, unsigned m);
/// (sigma_s x)(t) = x(t / s), horizon s * T.
StepFn dilate(const StepFn& x, const Rational& s);
SignedStep dilate(const SignedStep& x, const Rational& s);

/// Pairwise means (x_{2k-1} + x_{2k}) / 2; odd lengths are padded with a zero.
Seq sigma_half(const Seq& x);
RSeq sigma_half(const RSeq& x);

/// x on (0, c], zero beyond. Sequences keep entries k <= floor(c).
RSeq head_truncate(const RSeq& x, const Rational& c);
StepFn head_truncate(const StepFn& x, const Rational& c);
SignedStep head_truncate(const SignedStep& x, const Rational& c);

/// rearrange(concatenation).
RSeq direct_sum(const RSeq& x, const RSeq& y);
RSeq direct_sum(std::span<const RSeq> parts);

// --- conversions -----------------------------------------------------------

/// Unit cells (k-1, k].
StepFn to_stepfn(const RSeq& x);
StepFn to_stepfn(const Seq& x);
/// Requires integer breakpoints; throws Error("invalid-input") otherwise.
Seq to_seq(const StepFn& x);
/// Requires integer breakpoints and a nonincreasing function.
RSeq to_rseq(const StepFn& x);

// --- pointwise arithmetic --------------------------------------------------

/// Sorted union of the breakpoints of both functions.
std::vector<Rational> merge_breakpoints(const std::vector<Rational>& a, const std::vector<Rational>& b);
/// Re-expresses f on the given increasing grid (grid must contain f's breakpoints
/// for an exact result; points beyond the horizon get value zero).
SignedStep refine(const SignedStep& f, const std::vector<Rational>& grid);
/// Merges adjacent equal cells.
SignedStep canonical(const SignedStep& f);
StepFn canonical(const StepFn& f);

SignedStep operator+(const SignedStep& a, const SignedStep& b);
SignedStep operator-(const SignedStep& a, const SignedStep& b);
SignedStep operator-(const SignedStep& a);
SignedStep operator*(const Rational& c, const SignedStep& f);

StepFn add(const StepFn& a, const StepFn& b);
StepFn scale(const StepFn& f, const Rational& c);
StepFn positive_part(const SignedStep& f);
StepFn negative_part(const SignedStep& f);

/// Equality as functions on (0, inf) (zero extension, cell layout ignored).
bool same_function(const SignedStep& a, const SignedStep& b);
inline bool same_function(const StepFn& a, const StepFn& b) { return same_function(a.as_signed(), b.as_signed()); }

}  // namespace symfun
