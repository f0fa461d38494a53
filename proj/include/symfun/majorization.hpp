#pragma once

// Hardy-Littlewood submajorization and its uniform (shifted) strengthening,
// decided exactly with certificates.

#include <optional>

#include "symfun/core.hpp"

namespace symfun {

/// Offending window: the inequality failed for the integral over (a, b] of y.
struct Violation {
    Rational a;
    Rational b;
};

struct MajorizationReport {
    bool verdict = true;
    std::optional<Violation> first_violation;
    /// Minimal slack of the certifying inequalities (negative iff verdict is false).
    Rational margin;
};

/// y <<= x: integral_0^t mu(y) <= integral_0^t mu(x) for all t. Exact.
MajorizationReport submajorize(const StepFn& y, const StepFn& x);
MajorizationReport submajorize(const RSeq& y, const RSeq& x);

struct UniformReport {
    std::optional<unsigned> witness;
    /// Report for the witness, or for m_max when there is none.
    MajorizationReport report;
};

/// Uniform submajorization with shift m: sum_{k=ma+1}^b y_k <= sum_{k=a+1}^b x_k
/// for all integers a >= 0, b >= ma + 1. Returns the smallest m <= m_max.
UniformReport uniform_submajorize(const RSeq& y, const RSeq& x, unsigned m_max);
/// Function version: integral_{ma}^b mu(y) <= integral_a^b mu(x) for all real
/// 0 <= ma <= b.
UniformReport uniform_submajorize(const StepFn& y, const StepFn& x, unsigned m_max);

/// Decides, exactly, whether P(b) - P(c a) <= Q(d b) - Q(a) for every real
/// a >= 0 and b >= c a, where P, Q are the running integrals of p and q
/// (taken as given, not rearranged). Requires c, d >= 1.
MajorizationReport shifted_integral_check(const SignedStep& p, const SignedStep& q, const Rational& c,
                                          const Rational& d);

}  // namespace symfun
