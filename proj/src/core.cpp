#include "symfun/core.hpp"

#include <algorithm>
#include <numeric>

#include "symfun/error.hpp"

namespace symfun {

namespace {

void check_nonnegative(const std::vector<Rational>& values, const char* what) {
    for (const auto& v : values)
        require(v >= 0, "invalid-input", std::string(what) + ": negative entry " + to_string(v));
}

void check_increasing_positive(const std::vector<Rational>& points, const char* what) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        require(points[i] > 0, "invalid-input", std::string(what) + ": points must be positive");
        if (i > 0)
            require(points[i - 1] < points[i], "invalid-input",
                    std::string(what) + ": points must be strictly increasing");
    }
}

// Index of the cell (l, r] containing t, or size() when t is beyond the horizon.
std::size_t cell_index(const std::vector<Rational>& breaks, const Rational& t) {
    return static_cast<std::size_t>(std::lower_bound(breaks.begin(), breaks.end(), t) - breaks.begin());
}

}  // namespace

// --- Seq / RSeq --------------------------------------------------------------

Seq::Seq(std::vector<Rational> values) : values_(std::move(values)) {
    check_nonnegative(values_, "Seq");
}

RSeq::RSeq(std::vector<Rational> values) : values_(std::move(values)) {
    check_nonnegative(values_, "RSeq");
    for (std::size_t k = 1; k < values_.size(); ++k)
        require(values_[k - 1] >= values_[k], "invalid-input", "RSeq: values must be nonincreasing");
}

// --- SignedStep --------------------------------------------------------------

SignedStep::SignedStep(std::vector<Rational> breakpoints, std::vector<Rational> values)
    : breaks_(std::move(breakpoints)), values_(std::move(values)) {
    require(breaks_.size() == values_.size(), "invalid-input",
            "step function: breakpoints and values differ in length");
    check_increasing_positive(breaks_, "step function breakpoints");
    cumulative_.reserve(breaks_.size());
    Rational acc = 0;
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
        acc += values_[i] * cell_length(i);
        cumulative_.push_back(acc);
    }
}

Rational SignedStep::value_at(const Rational& t) const {
    require(t > 0, "domain", "step function evaluated at t <= 0");
    std::size_t i = cell_index(breaks_, t);
    return i < values_.size() ? values_[i] : Rational(0);
}

Rational SignedStep::value_right(const Rational& t) const {
    require(t >= 0, "domain", "step function evaluated at t < 0");
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - breaks_.begin());
    return i < values_.size() ? values_[i] : Rational(0);
}

Rational SignedStep::integral(const Rational& t) const {
    require(t >= 0, "domain", "integral bound must be nonnegative");
    if (breaks_.empty() || t == 0) return 0;
    std::size_t i = cell_index(breaks_, t);
    if (i >= breaks_.size()) return cumulative_.back();
    Rational below = i == 0 ? Rational(0) : cumulative_[i - 1];
    return below + values_[i] * (t - cell_left(i));
}

// --- StepFn ------------------------------------------------------------------

StepFn::StepFn(std::vector<Rational> breakpoints, std::vector<Rational> values, bool tail)
    : f_(std::move(breakpoints), std::move(values)), tail_(tail) {
    require(!f_.empty(), "invalid-input", "StepFn needs at least one cell (T > 0)");
    check_nonnegative(f_.values(), "StepFn");
}

StepFn StepFn::from_signed(SignedStep f, bool tail) {
    require(!f.empty(), "invalid-input", "StepFn needs at least one cell (T > 0)");
    check_nonnegative(f.values(), "StepFn");
    return StepFn(std::move(f), tail);
}

StepFn StepFn::indicator(const Rational& length, const Rational& height) {
    return StepFn({length}, {height});
}

bool StepFn::is_nonincreasing() const {
    const auto& v = values();
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i - 1] < v[i]) return false;
    return true;
}

// --- Partition ---------------------------------------------------------------

Partition::Partition(std::vector<Rational> nodes) : nodes_(std::move(nodes)) {
    check_increasing_positive(nodes_, "partition nodes");
}

Partition merge(const Partition& a, const Partition& b) {
    return Partition(merge_breakpoints(a.nodes(), b.nodes()));
}

Partition unit_partition(std::size_t n) {
    std::vector<Rational> nodes;
    nodes.reserve(n);
    for (std::size_t k = 1; k <= n; ++k) nodes.emplace_back(static_cast<unsigned long>(k));
    return Partition(std::move(nodes));
}

// --- rearrangement -----------------------------------------------------------

RSeq rearrange(const Seq& x) {
    std::vector<Rational> v = x.values();
    std::stable_sort(v.begin(), v.end(), [](const Rational& a, const Rational& b) { return a > b; });
    return RSeq(std::move(v));
}

RSeq rearrange(const RSeq& x) { return x; }

namespace {

StepFn rearrange_cells(const SignedStep& f, bool absolute, bool tail) {
    struct Cell {
        Rational value, length;
    };
    std::vector<Cell> cells;
    cells.reserve(f.cell_count());
    for (std::size_t i = 0; i < f.cell_count(); ++i) {
        Rational v = f.values()[i];
        if (absolute && v < 0) v = -v;
        cells.push_back({std::move(v), f.cell_length(i)});
    }
    std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.value > b.value; });
    std::vector<Rational> breaks, values;
    Rational t = 0;
    for (auto& c : cells) {
        t += c.length;
        if (!values.empty() && values.back() == c.value) {
            breaks.back() = t;
        } else {
            breaks.push_back(t);
            values.push_back(std::move(c.value));
        }
    }
    return StepFn(std::move(breaks), std::move(values), tail);
}

}  // namespace

StepFn rearrange(const StepFn& x) { return rearrange_cells(x.as_signed(), false, x.tail()); }

StepFn rearrange(const SignedStep& x) {
    require(!x.empty(), "invalid-input", "cannot rearrange the empty function");
    return rearrange_cells(x, true, false);
}

Rational distribution(const Seq& x, const Rational& s) {
    long count = std::count_if(x.values().begin(), x.values().end(), [&](const Rational& v) { return v > s; });
    return Rational(count);
}

Rational distribution(const StepFn& x, const Rational& s) {
    Rational measure = 0;
    for (std::size_t i = 0; i < x.cell_count(); ++i)
        if (x.values()[i] > s) measure += x.cell_length(i);
    return measure;
}

// --- partial sums ------------------------------------------------------------

PartialSum partial_sum(const RSeq& x, const Rational& t) {
    require(t >= 0, "domain", "partial_sum requires t >= 0");
    PartialSum out;
    Rational n(static_cast<unsigned long>(x.size()));
    Rational u = t;
    if (u > n) {
        u = n;
        out.truncated = true;
    }
    Rational whole = floor(u);
    std::size_t k = static_cast<std::size_t>(whole.get_num().get_ui());
    for (std::size_t i = 0; i < k; ++i) out.value += x[i];
    Rational frac = u - whole;
    if (frac > 0) out.value += frac * x[k];
    return out;
}

PartialSum partial_sum(const StepFn& x, const Rational& t) {
    require(t >= 0, "domain", "partial_sum requires t >= 0");
    return {x.integral(t), t > x.horizon()};
}

// --- dilations and averages --------------------------------------------------

RSeq dilate(const RSeq& x, unsigned m) {
    require(m >= 1, "domain", "dilation factor must be >= 1");
    std::vector<Rational> out;
    out.reserve(x.size() * m);
    for (const auto& v : x.values())
        for (unsigned j = 0; j < m; ++j) out.push_back(v);
    return RSeq(std::move(out));
}

SignedStep dilate(const SignedStep& x, const Rational& s) {
    require(s > 0, "domain", "dilation factor must be positive");
    std::vector<Rational> breaks = x.breakpoints();
    for (auto& b : breaks) b *= s;
    return SignedStep(std::move(breaks), x.values());
}

StepFn dilate(const StepFn& x, const Rational& s) {
    return StepFn::from_signed(dilate(x.as_signed(), s), x.tail());
}

Seq sigma_half(const Seq& x) {
    std::vector<Rational> out;
    out.reserve((x.size() + 1) / 2);
    for (std::size_t k = 0; k < x.size(); k += 2) {
        Rational second = k + 1 < x.size() ? x[k + 1] : Rational(0);
        out.push_back((x[k] + second) / 2);
    }
    return Seq(std::move(out));
}

RSeq sigma_half(const RSeq& x) { return RSeq(sigma_half(Seq(x.values())).values()); }

RSeq head_truncate(const RSeq& x, const Rational& c) {
    require(c > 0, "domain", "head_truncate requires c > 0");
    std::vector<Rational> out = x.values();
    Rational keep = floor(c);
    for (std::size_t k = 0; k < out.size(); ++k)
        if (Rational(static_cast<unsigned long>(k + 1)) > keep) out[k] = 0;
    return RSeq(std::move(out));
}

SignedStep head_truncate(const SignedStep& x, const Rational& c) {
    require(c > 0, "domain", "head_truncate requires c > 0");
    if (c >= x.horizon()) return x;
    std::vector<Rational> breaks, values;
    for (std::size_t i = 0; i < x.cell_count(); ++i) {
        if (x.breakpoints()[i] < c) {
            breaks.push_back(x.breakpoints()[i]);
            values.push_back(x.values()[i]);
        } else {
            breaks.push_back(c);
            values.push_back(x.values()[i]);
            break;
        }
    }
    breaks.push_back(x.horizon());
    values.emplace_back(0);
    return SignedStep(std::move(breaks), std::move(values));
}

StepFn head_truncate(const StepFn& x, const Rational& c) {
    return StepFn::from_signed(head_truncate(x.as_signed(), c), x.tail() && c >= x.horizon());
}

RSeq direct_sum(const RSeq& x, const RSeq& y) {
    std::vector<Rational> all = x.values();
    all.insert(all.end(), y.values().begin(), y.values().end());
    return rearrange(Seq(std::move(all)));
}

RSeq direct_sum(std::span<const RSeq> parts) {
    std::vector<Rational> all;
    for (const auto& p : parts) all.insert(all.end(), p.values().begin(), p.values().end());
    return rearrange(Seq(std::move(all)));
}

// --- conversions -------------------------------------------------------------

StepFn to_stepfn(const Seq& x) {
    require(!x.empty(), "invalid-input", "cannot convert an empty sequence to a step function");
    std::vector<Rational> breaks;
    breaks.reserve(x.size());
    for (std::size_t k = 1; k <= x.size(); ++k) breaks.emplace_back(static_cast<unsigned long>(k));
    return StepFn(std::move(breaks), x.values());
}

StepFn to_stepfn(const RSeq& x) { return to_stepfn(Seq(x.values())); }

Seq to_seq(const StepFn& x) {
    std::vector<Rational> out;
    for (std::size_t i = 0; i < x.cell_count(); ++i) {
        require(is_integer(x.breakpoints()[i]), "invalid-input",
                "step function with non-integer breakpoints is not a sequence");
        Rational len = x.cell_length(i);
        for (unsigned long j = 0; j < len.get_num().get_ui(); ++j) out.push_back(x.values()[i]);
    }
    return Seq(std::move(out));
}

RSeq to_rseq(const StepFn& x) {
    require(x.is_nonincreasing(), "invalid-input", "step function is not nonincreasing");
    return RSeq(to_seq(x).values());
}

// --- pointwise arithmetic ----------------------------------------------------

std::vector<Rational> merge_breakpoints(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    std::vector<Rational> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

SignedStep refine(const SignedStep& f, const std::vector<Rational>& grid) {
    std::vector<Rational> values;
    values.reserve(grid.size());
    for (const auto& g : grid) values.push_back(f.value_at(g));
    return SignedStep(grid, std::move(values));
}

SignedStep canonical(const SignedStep& f) {
    std::vector<Rational> breaks, values;
    for (std::size_t i = 0; i < f.cell_count(); ++i) {
        if (!values.empty() && values.back() == f.values()[i]) {
            breaks.back() = f.breakpoints()[i];
        } else {
            breaks.push_back(f.breakpoints()[i]);
            values.push_back(f.values()[i]);
        }
    }
    return SignedStep(std::move(breaks), std::move(values));
}

StepFn canonical(const StepFn& f) { return StepFn::from_signed(canonical(f.as_signed()), f.tail()); }

namespace {

template <typename Op>
SignedStep combine(const SignedStep& a, const SignedStep& b, Op op) {
    auto grid = merge_breakpoints(a.breakpoints(), b.breakpoints());
    std::vector<Rational> values;
    values.reserve(grid.size());
    for (const auto& g : grid) values.push_back(op(a.value_at(g), b.value_at(g)));
    return SignedStep(std::move(grid), std::move(values));
}

}  // namespace

SignedStep operator+(const SignedStep& a, const SignedStep& b) {
    return combine(a, b, [](const Rational& u, const Rational& v) { return Rational(u + v); });
}

SignedStep operator-(const SignedStep& a, const SignedStep& b) {
    return combine(a, b, [](const Rational& u, const Rational& v) { return Rational(u - v); });
}

SignedStep operator-(const SignedStep& a) { return Rational(-1) * a; }

SignedStep operator*(const Rational& c, const SignedStep& f) {
    std::vector<Rational> values = f.values();
    for (auto& v : values) v *= c;
    return SignedStep(f.breakpoints(), std::move(values));
}

StepFn add(const StepFn& a, const StepFn& b) {
    return StepFn::from_signed(a.as_signed() + b.as_signed(), a.tail() || b.tail());
}

StepFn scale(const StepFn& f, const Rational& c) {
    require(c >= 0, "domain", "scale factor must be nonnegative");
    return StepFn::from_signed(c * f.as_signed(), f.tail());
}

StepFn positive_part(const SignedStep& f) {
    require(!f.empty(), "invalid-input", "positive part of the empty function");
    std::vector<Rational> values = f.values();
    for (auto& v : values)
        if (v < 0) v = 0;
    return StepFn(f.breakpoints(), std::move(values));
}

StepFn negative_part(const SignedStep& f) {
    require(!f.empty(), "invalid-input", "negative part of the empty function");
    std::vector<Rational> values = f.values();
    for (auto& v : values) v = v < 0 ? Rational(-v) : Rational(0);
    return StepFn(f.breakpoints(), std::move(values));
}

bool same_function(const SignedStep& a, const SignedStep& b) {
    auto grid = merge_breakpoints(a.breakpoints(), b.breakpoints());
    for (const auto& g : grid)
        if (a.value_at(g) != b.value_at(g)) return false;
    return true;
}

}  // namespace symfun
