#include "symfun/majorization.hpp"

#include <algorithm>

#include "symfun/error.hpp"

namespace symfun {

namespace {

SignedStep unit_cells(const RSeq& x) {
    std::vector<Rational> breaks;
    breaks.reserve(x.size());
    for (std::size_t k = 1; k <= x.size(); ++k) breaks.emplace_back(static_cast<unsigned long>(k));
    return SignedStep(std::move(breaks), x.values());
}

// Both arguments are already nonincreasing.
MajorizationReport compare_integrals(const SignedStep& y, const SignedStep& x) {
    MajorizationReport out;
    auto grid = merge_breakpoints(y.breakpoints(), x.breakpoints());
    if (grid.empty()) return out;
    bool first = true;
    for (const auto& t : grid) {
        Rational slack = x.integral(t) - y.integral(t);
        if (first || slack < out.margin) out.margin = slack;
        first = false;
        if (slack < 0 && !out.first_violation) {
            out.verdict = false;
            out.first_violation = Violation{Rational(0), t};
        }
    }
    return out;
}

std::vector<Rational> sorted_unique(std::vector<Rational> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

MajorizationReport submajorize(const StepFn& y, const StepFn& x) {
    return compare_integrals(rearrange(y).as_signed(), rearrange(x).as_signed());
}

MajorizationReport submajorize(const RSeq& y, const RSeq& x) {
    return compare_integrals(unit_cells(y), unit_cells(x));
}

MajorizationReport shifted_integral_check(const SignedStep& p, const SignedStep& q, const Rational& c,
                                          const Rational& d) {
    require(c >= 1 && d >= 1, "domain", "shift factors must be >= 1");

    // D(b) = P(b) - Q(d b) is linear between consecutive points of b_grid.
    std::vector<Rational> b_grid{Rational(0)};
    for (const auto& t : p.breakpoints()) b_grid.push_back(t);
    for (const auto& t : q.breakpoints()) b_grid.push_back(t / d);
    b_grid = sorted_unique(std::move(b_grid));

    auto D = [&](const Rational& b) { return Rational(p.integral(b) - q.integral(d * b)); };
    std::vector<Rational> d_vals;
    d_vals.reserve(b_grid.size());
    for (const auto& b : b_grid) d_vals.push_back(D(b));

    // Suffix maxima with the position attaining them.
    std::vector<Rational> suffix(b_grid.size());
    std::vector<std::size_t> arg(b_grid.size());
    for (std::size_t i = b_grid.size(); i-- > 0;) {
        if (i + 1 == b_grid.size() || d_vals[i] >= suffix[i + 1]) {
            suffix[i] = d_vals[i];
            arg[i] = i;
        } else {
            suffix[i] = suffix[i + 1];
            arg[i] = arg[i + 1];
        }
    }

    // sup_{b >= s} D(b) and a point attaining it.
    auto tail_max = [&](const Rational& s) -> std::pair<Rational, Rational> {
        auto it = std::lower_bound(b_grid.begin(), b_grid.end(), s);
        std::size_t i = static_cast<std::size_t>(it - b_grid.begin());
        if (i == b_grid.size()) return {d_vals.back(), s};
        if (b_grid[i] == s) return {suffix[i], b_grid[arg[i]]};
        Rational here = D(s);
        if (here >= suffix[i]) return {here, s};
        return {suffix[i], b_grid[arg[i]]};
    };

    std::vector<Rational> a_grid{Rational(0)};
    for (const auto& t : p.breakpoints()) a_grid.push_back(t / c);
    for (const auto& t : q.breakpoints()) a_grid.push_back(t);
    for (const auto& t : b_grid) a_grid.push_back(t / c);
    a_grid = sorted_unique(std::move(a_grid));

    MajorizationReport out;
    bool first = true;
    for (const auto& a : a_grid) {
        Rational ca = c * a;
        auto [h, b] = tail_max(ca);
        Rational slack = p.integral(ca) - q.integral(a) - h;
        if (first || slack < out.margin) out.margin = slack;
        first = false;
        if (slack < 0 && !out.first_violation) {
            out.verdict = false;
            out.first_violation = Violation{a, b};
        }
    }
    return out;
}

namespace {

MajorizationReport uniform_sequence_check(const RSeq& y, const RSeq& x, unsigned m) {
    std::size_t n = std::max(y.size(), x.size());
    std::vector<Rational> Y(n + 1), X(n + 1);
    for (std::size_t k = 1; k <= n; ++k) {
        Y[k] = Y[k - 1] + (k <= y.size() ? y[k - 1] : Rational(0));
        X[k] = X[k - 1] + (k <= x.size() ? x[k - 1] : Rational(0));
    }
    std::vector<Rational> suffix(n + 1);
    std::vector<std::size_t> arg(n + 1);
    for (std::size_t b = n + 1; b-- > 0;) {
        Rational d = Y[b] - X[b];
        if (b == n || d >= suffix[b + 1]) {
            suffix[b] = d;
            arg[b] = b;
        } else {
            suffix[b] = suffix[b + 1];
            arg[b] = arg[b + 1];
        }
    }
    MajorizationReport out;
    out.margin = 0;
    bool first = true;
    // For m a >= n both sides are constant in b and the inequality reduces to X(a) <= X(n).
    for (std::size_t a = 0; a * m + 1 <= n; ++a) {
        std::size_t lo = a * m + 1;
        Rational slack = Y[a * m] - X[a] - suffix[lo];
        if (first || slack < out.margin) out.margin = slack;
        first = false;
        if (slack < 0 && !out.first_violation) {
            out.verdict = false;
            out.first_violation =
                Violation{Rational(static_cast<unsigned long>(a)), Rational(static_cast<unsigned long>(arg[lo]))};
        }
    }
    return out;
}

}  // namespace

UniformReport uniform_submajorize(const RSeq& y, const RSeq& x, unsigned m_max) {
    require(m_max >= 1, "domain", "m_max must be >= 1");
    UniformReport out;
    for (unsigned m = 1; m <= m_max; ++m) {
        out.report = uniform_sequence_check(y, x, m);
        if (out.report.verdict) {
            out.witness = m;
            return out;
        }
    }
    return out;
}

UniformReport uniform_submajorize(const StepFn& y, const StepFn& x, unsigned m_max) {
    require(m_max >= 1, "domain", "m_max must be >= 1");
    SignedStep ry = rearrange(y).as_signed();
    SignedStep rx = rearrange(x).as_signed();
    UniformReport out;
    for (unsigned m = 1; m <= m_max; ++m) {
        out.report = shifted_integral_check(ry, rx, Rational(m), Rational(1));
        if (out.report.verdict) {
            out.witness = m;
            return out;
        }
    }
    return out;
}

}  // namespace symfun
