#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "symfun/core.hpp"

namespace testing_support {

using symfun::Rational;

inline Rational q(const char* text) { return symfun::parse_rational(text); }
inline Rational q(long n, long d = 1) { return Rational(n) / d; }

inline std::vector<Rational> qs(std::initializer_list<const char*> items) {
    std::vector<Rational> out;
    for (const char* s : items) out.push_back(q(s));
    return out;
}

/// Cells given as (right breakpoint, value) pairs.
inline symfun::StepFn fn(std::initializer_list<std::pair<const char*, const char*>> cells) {
    std::vector<Rational> b, v;
    for (const auto& [t, x] : cells) {
        b.push_back(q(t));
        v.push_back(q(x));
    }
    return symfun::StepFn(b, v);
}

inline symfun::SignedStep sfn(std::initializer_list<std::pair<const char*, const char*>> cells) {
    std::vector<Rational> b, v;
    for (const auto& [t, x] : cells) {
        b.push_back(q(t));
        v.push_back(q(x));
    }
    return symfun::SignedStep(b, v);
}

inline symfun::RSeq rseq(std::initializer_list<const char*> items) { return symfun::RSeq(qs(items)); }
inline symfun::Seq seq(std::initializer_list<const char*> items) { return symfun::Seq(qs(items)); }

}  // namespace testing_support
