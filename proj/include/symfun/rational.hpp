#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace symfun {

using Rational = mpq_class;

/// Parses "p/q", an integer, or a finite decimal ("0.25", "-1.5e-3") into an
/// exact rational. Throws Error("invalid-input") otherwise.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers are printed without a denominator.
std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact conversion of a finite double.
Rational from_double(double v);

Rational floor(const Rational& q);
Rational ceil(const Rational& q);
bool is_integer(const Rational& q);

/// q^n for any integer n (q != 0 when n < 0).
Rational pow(const Rational& q, long n);

inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }

}  // namespace symfun
