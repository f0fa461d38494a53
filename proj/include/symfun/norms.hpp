#pragma once

// Symmetric norms on rearranged step functions and the weights that
// parameterize them.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symfun/core.hpp"

namespace symfun {

/// Concave increasing weight with psi(0) = 0.
class Psi {
public:
    enum class Family { Log1p, Power, Identity, Table };

    static Psi log1p();
    /// t^alpha, alpha in (0, 1].
    static Psi power(double alpha);
    static Psi identity();
    /// Piecewise-linear interpolation of (t, value) knots; the origin is
    /// prepended when missing and the last slope is extended. Throws
    /// Error("invalid-input") unless the knots are increasing and concave.
    static Psi table(std::vector<std::pair<double, double>> knots);
    /// "log1p", "pow:0.5", "identity" / "id", "table:1:1,2:1.5,4:2".
    static Psi parse(std::string_view text);

    double operator()(double t) const;
    double operator()(const Rational& t) const { return (*this)(to_double(t)); }

    Family family() const noexcept { return family_; }
    double alpha() const noexcept { return alpha_; }
    std::string name() const;

private:
    Psi(Family f, double alpha) : family_(f), alpha_(alpha) {}
    Family family_;
    double alpha_ = 1.0;
    std::vector<std::pair<double, double>> knots_;
};

/// Midpoint concavity and monotonicity on a geometric grid of [t_lo, t_hi],
/// relative tolerance 1e-12.
bool looks_concave(const Psi& psi, double t_lo, double t_hi, int steps);

struct NormSpec {
    enum class Kind { Sup, Lp, L1, Marcinkiewicz, Lorentz, F };

    Kind kind = Kind::Sup;
    double p = 1.0;
    std::optional<Psi> psi;
    std::shared_ptr<const NormSpec> inner;

    static NormSpec sup();
    static NormSpec lp(double p);
    static NormSpec l1();
    static NormSpec marcinkiewicz(Psi psi);
    static NormSpec lorentz(Psi psi);
    static NormSpec fnorm(NormSpec inner);
    /// "sup", "lp:2", "l1", "marc:log1p", "lorentz:pow:0.5", "f:marc:log1p".
    static NormSpec parse(std::string_view text);
    std::string to_string() const;
};

struct NormValue {
    double value = 0.0;
    std::optional<Rational> exact;  ///< present for Sup and L1

    std::string budget() const { return exact ? "exact" : "float(ulp-bound)"; }
};

NormValue norm(const StepFn& x, const NormSpec& spec);
NormValue norm(const RSeq& x, const NormSpec& spec);

/// Floating-point step function with cells (b_{i-1}, b_i]; used for sampled
/// models of smooth functions.
struct FloatStep {
    std::vector<double> breakpoints;
    std::vector<double> values;
};

/// Cells sorted by |value|, descending.
FloatStep rearrange(const FloatStep& x);
double norm(const FloatStep& x, const NormSpec& spec);

/// Unit-cell averages of the rearrangement: E(mu(x) | {(k-1, k]}).
StepFn unit_averages(const StepFn& x);

struct RatioProfile {
    std::vector<std::pair<double, double>> points;  ///< (t, psi(2t)/psi(t))
    double min = 0.0;
};

RatioProfile psi_ratio_profile(const Psi& psi, double t_lo, double t_hi, int steps);

}  // namespace symfun
