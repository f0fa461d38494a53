#include "symfun/rational.hpp"

#include <cctype>
#include <cmath>

#include "symfun/error.hpp"

namespace symfun {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// Parses [+-]digits[.digits][e[+-]digits] exactly.
Rational parse_decimal(const std::string& s) {
    std::size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
    std::string mantissa;
    long frac_digits = 0;
    bool seen_dot = false;
    for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
        if (s[i] == '.') {
            if (seen_dot) throw Error("invalid-input", "malformed number '" + s + "'");
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            mantissa.push_back(s[i]);
            if (seen_dot) ++frac_digits;
        } else {
            throw Error("invalid-input", "malformed number '" + s + "'");
        }
    }
    if (mantissa.empty()) throw Error("invalid-input", "malformed number '" + s + "'");
    long exponent = 0;
    if (i < s.size()) {
        std::string exp_part = s.substr(i + 1);
        std::string_view digits = exp_part;
        bool exp_negative = false;
        if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
            exp_negative = digits[0] == '-';
            digits.remove_prefix(1);
        }
        if (!all_digits(digits) || digits.size() > 6)
            throw Error("invalid-input", "malformed exponent in '" + s + "'");
        exponent = std::stol(std::string(digits));
        if (exp_negative) exponent = -exponent;
    }
    Rational value(mpz_class(mantissa, 10));
    value *= pow(Rational(10), exponent - frac_digits);
    if (negative) value = -value;
    return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string s = trim(text);
    if (s.empty()) throw Error("invalid-input", "empty rational");
    auto slash = s.find('/');
    if (slash == std::string::npos) return parse_decimal(s);

    std::string num = trim(std::string_view(s).substr(0, slash));
    std::string den = trim(std::string_view(s).substr(slash + 1));
    std::string_view num_digits = num;
    if (!num_digits.empty() && (num_digits[0] == '-' || num_digits[0] == '+'))
        num_digits.remove_prefix(1);
    if (!all_digits(num_digits) || !all_digits(den))
        throw Error("invalid-input", "malformed rational '" + s + "'");
    mpz_class d(den, 10);
    if (d == 0) throw Error("invalid-input", "zero denominator in '" + s + "'");
    Rational q(mpz_class(num[0] == '+' ? num.substr(1) : num, 10), d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational from_double(double v) {
    if (!std::isfinite(v)) throw Error("invalid-input", "non-finite value");
    return Rational(v);
}

Rational floor(const Rational& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(r);
}

Rational ceil(const Rational& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(r);
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Rational pow(const Rational& q, long n) {
    if (n == 0) return Rational(1);
    if (n < 0) {
        if (q == 0) throw Error("domain", "zero to a negative power");
        Rational inv = 1 / q;
        return pow(inv, -n);
    }
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(n));
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace symfun
