#pragma once

// Averaging operators: conditional expectations on partitions, the Hardy
// operator, logarithmic means, and the node constructions built from the
// level sets of X(t) = integral_0^t x.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symfun/core.hpp"
#include "symfun/norms.hpp"

namespace symfun {

/// What happens on the unbounded cell past the last node.
enum class Beyond {
    Keep,  ///< x is left unchanged (an empty partition returns x)
    Drop,  ///< the cell carries no term of the sum: zero there
};

/// Cell averages of x over (0, p_1], (p_1, p_2], ...; x is treated as zero
/// beyond its horizon.
SignedStep expectation(const SignedStep& x, const Partition& part, Beyond beyond = Beyond::Keep);
StepFn expectation(const StepFn& x, const Partition& part, Beyond beyond = Beyond::Keep);
StepFn expectation(const RSeq& x, const Partition& part, Beyond beyond = Beyond::Keep);

/// Function of the form scale * (alpha / t + beta) on cells (l, r] tiling
/// (0, H], continued by scale * tail / t beyond H.
class SmoothEval {
public:
    struct Cell {
        Rational left;
        Rational right;
        Rational alpha;
        Rational beta;
    };

    SmoothEval() = default;
    SmoothEval(std::vector<Cell> cells, double scale, Rational tail = 0);

    const std::vector<Cell>& cells() const noexcept { return cells_; }
    double scale() const noexcept { return scale_; }
    const Rational& tail() const noexcept { return tail_; }
    Rational horizon() const { return cells_.empty() ? Rational(0) : cells_.back().right; }

    /// Throws Error("domain") for t <= 0.
    double value(const Rational& t) const;
    double value(double t) const;
    /// Integral over (a, b], closed form with logarithms.
    double integral(const Rational& a, const Rational& b) const;

    enum class Part { Positive, Absolute };
    /// Piecewise-constant model on (0, upto]: every cell is split into
    /// `per_cell` geometric pieces carrying the exact average of f_+ or |f|.
    FloatStep sample(Part part, int per_cell, const Rational& upto) const;

private:
    std::vector<Cell> cells_;
    double scale_ = 1.0;
    Rational tail_;
};

/// (Cx)(t) = X(t) / t, exact.
Rational hardy_value(const SignedStep& x, const Rational& t);
SmoothEval hardy(const SignedStep& x);
inline SmoothEval hardy(const StepFn& x) { return hardy(x.as_signed()); }

/// (M_m x)(t) = (X(t) - X(t/m)) / (t ln m), m >= 2.
SmoothEval m_avg(const SignedStep& x, unsigned m);
inline SmoothEval m_avg(const StepFn& x, unsigned m) { return m_avg(x.as_signed(), m); }

struct ANodes {
    std::map<int, Rational> nodes;
    bool below_theta = false;  ///< X(T) < theta: no node with n >= 0 exists

    std::optional<Rational> at(int n) const;
};

/// a_n(theta): the smallest t with X(t) = (3/2)^n theta, for n >= n_min and
/// (3/2)^n theta <= X(T). Requires x nonincreasing and theta > 0.
ANodes a_nodes(const StepFn& x, const Rational& theta, int n_min = 0);

/// n -> kappa_n over a finite window; nullopt encodes infinity. Indices
/// outside the window read as infinity.
class KappaSeq {
public:
    KappaSeq() = default;
    KappaSeq(int n_min, std::vector<std::optional<long>> values);
    static KappaSeq constant(long kappa, int n_min, int n_max);
    /// Comma list such as "2,2,inf,5" ("∞" also accepted), indexed from n_min.
    static KappaSeq parse(std::string_view text, int n_min = 0);

    std::optional<long> at(int n) const;
    int n_min() const noexcept { return n_min_; }
    int n_max() const noexcept { return n_min_ + static_cast<int>(values_.size()) - 1; }
    const std::vector<std::optional<long>>& values() const noexcept { return values_; }
    std::string to_string() const;

    bool operator==(const KappaSeq&) const = default;

private:
    int n_min_ = 0;
    std::vector<std::optional<long>> values_;
};

/// kappa_n if kappa_n >= lambda, infinity otherwise.
KappaSeq kappa_truncate(const KappaSeq& kappa, double lambda);

struct NodeSet {
    Partition partition;
    std::vector<int> indices;       ///< n contributing each node
    bool window_truncated = false;  ///< some index lacked a_{.+1} on a tailed input
};

/// {kappa_n a_{3n}(theta) : kappa_n^2 a_{3n} < a_{3n+1}} over the kappa window.
NodeSet build_B(const StepFn& x, const KappaSeq& kappa, const Rational& theta);
/// {m a_n(1) : m^2 a_n(1) < a_{n+1}(1)}, n >= n_min.
NodeSet build_A_m(const StepFn& x, unsigned m, int n_min = 0);

/// Nodes 2^lo, ..., 2^hi.
Partition dyadic_partition(int lo, int hi);

}  // namespace symfun
