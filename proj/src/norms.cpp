#include "symfun/norms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <type_traits>

#include "symfun/error.hpp"

namespace symfun {

namespace {

double parse_double(std::string_view text, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    require(ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(v), "invalid-input",
            std::string("malformed ") + what + " '" + std::string(text) + "'");
    return v;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

// --- Psi ---------------------------------------------------------------------

Psi Psi::log1p() { return Psi(Family::Log1p, 1.0); }

Psi Psi::power(double alpha) {
    require(alpha > 0.0 && alpha <= 1.0, "invalid-input", "power weight needs alpha in (0, 1]");
    return Psi(Family::Power, alpha);
}

Psi Psi::identity() { return Psi(Family::Identity, 1.0); }

Psi Psi::table(std::vector<std::pair<double, double>> knots) {
    require(!knots.empty(), "invalid-input", "table weight needs at least one knot");
    if (knots.front().first != 0.0) knots.insert(knots.begin(), {0.0, 0.0});
    require(knots.front().second == 0.0, "invalid-input", "table weight must vanish at 0");
    require(knots.size() >= 2, "invalid-input", "table weight needs a positive knot");
    double prev_slope = INFINITY;
    for (std::size_t i = 1; i < knots.size(); ++i) {
        double dt = knots[i].first - knots[i - 1].first;
        require(dt > 0.0, "invalid-input", "table knots must be strictly increasing in t");
        double slope = (knots[i].second - knots[i - 1].second) / dt;
        require(slope > 0.0, "invalid-input", "table weight must be increasing");
        require(slope <= prev_slope * (1 + 1e-12), "invalid-input", "table weight must be concave");
        prev_slope = slope;
    }
    Psi psi(Family::Table, 1.0);
    psi.knots_ = std::move(knots);
    return psi;
}

Psi Psi::parse(std::string_view text) {
    if (text == "log1p") return log1p();
    if (text == "identity" || text == "id") return identity();
    for (std::string_view prefix : {"pow:", "power:"}) {
        if (text.starts_with(prefix)) {
            std::string_view arg = text.substr(prefix.size());
            auto slash = arg.find('/');
            if (slash != std::string_view::npos)
                return power(to_double(parse_rational(arg)));
            return power(parse_double(arg, "exponent"));
        }
    }
    if (text.starts_with("table:")) {
        std::vector<std::pair<double, double>> knots;
        std::string_view rest = text.substr(6);
        while (!rest.empty()) {
            auto comma = rest.find(',');
            std::string_view item = rest.substr(0, comma);
            auto colon = item.find(':');
            require(colon != std::string_view::npos, "invalid-input", "table knot must be 't:value'");
            knots.emplace_back(parse_double(item.substr(0, colon), "knot"),
                               parse_double(item.substr(colon + 1), "knot"));
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        return table(std::move(knots));
    }
    throw Error("invalid-input", "unknown weight '" + std::string(text) + "'");
}

double Psi::operator()(double t) const {
    require(t >= 0.0, "domain", "weight evaluated at negative t");
    switch (family_) {
        case Family::Log1p:
            return std::log1p(t);
        case Family::Power:
            return std::pow(t, alpha_);
        case Family::Identity:
            return t;
        case Family::Table: {
            auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                       [](double v, const auto& k) { return v < k.first; });
            std::size_t i = static_cast<std::size_t>(it - knots_.begin());
            if (i >= knots_.size()) i = knots_.size() - 1;
            const auto& [t0, v0] = knots_[i - 1];
            const auto& [t1, v1] = knots_[i];
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        }
    }
    return 0.0;
}

std::string Psi::name() const {
    switch (family_) {
        case Family::Log1p:
            return "log1p";
        case Family::Power:
            return "pow:" + format_double(alpha_);
        case Family::Identity:
            return "identity";
        case Family::Table: {
            std::string out = "table:";
            for (std::size_t i = 1; i < knots_.size(); ++i) {
                if (i > 1) out += ',';
                out += format_double(knots_[i].first) + ':' + format_double(knots_[i].second);
            }
            return out;
        }
    }
    return {};
}

bool looks_concave(const Psi& psi, double t_lo, double t_hi, int steps) {
    double ratio = std::pow(t_hi / t_lo, 1.0 / std::max(1, steps - 1));
    double prev = psi(0.0);
    if (prev != 0.0) return false;
    for (int k = 0; k < steps; ++k) {
        double t = t_lo * std::pow(ratio, k);
        double v = psi(t);
        if (v <= prev) return false;
        prev = v;
        for (double h : {t / 2, t / 8}) {
            double mid = psi(t);
            double avg = 0.5 * (psi(t - h) + psi(t + h));
            if (avg > mid * (1 + 1e-12)) return false;
        }
    }
    return true;
}

// --- NormSpec ----------------------------------------------------------------

NormSpec NormSpec::sup() { return NormSpec{}; }

NormSpec NormSpec::lp(double p) {
    require(p >= 1.0 && std::isfinite(p), "invalid-input", "lp norm needs p >= 1");
    NormSpec s;
    s.kind = Kind::Lp;
    s.p = p;
    return s;
}

NormSpec NormSpec::l1() {
    NormSpec s;
    s.kind = Kind::L1;
    return s;
}

NormSpec NormSpec::marcinkiewicz(Psi psi) {
    NormSpec s;
    s.kind = Kind::Marcinkiewicz;
    s.psi = std::move(psi);
    return s;
}

NormSpec NormSpec::lorentz(Psi psi) {
    NormSpec s;
    s.kind = Kind::Lorentz;
    s.psi = std::move(psi);
    return s;
}

NormSpec NormSpec::fnorm(NormSpec inner) {
    NormSpec s;
    s.kind = Kind::F;
    s.inner = std::make_shared<const NormSpec>(std::move(inner));
    return s;
}

NormSpec NormSpec::parse(std::string_view text) {
    if (text == "sup") return sup();
    if (text == "l1") return l1();
    if (text.starts_with("lp:")) return lp(parse_double(text.substr(3), "exponent"));
    if (text.starts_with("marc:")) return marcinkiewicz(Psi::parse(text.substr(5)));
    if (text.starts_with("lorentz:")) return lorentz(Psi::parse(text.substr(8)));
    if (text.starts_with("f:")) return fnorm(parse(text.substr(2)));
    throw Error("invalid-input", "unknown norm '" + std::string(text) + "'");
}

std::string NormSpec::to_string() const {
    switch (kind) {
        case Kind::Sup:
            return "sup";
        case Kind::Lp:
            return "lp:" + format_double(p);
        case Kind::L1:
            return "l1";
        case Kind::Marcinkiewicz:
            return "marc:" + psi->name();
        case Kind::Lorentz:
            return "lorentz:" + psi->name();
        case Kind::F:
            return "f:" + inner->to_string();
    }
    return {};
}

// --- evaluation --------------------------------------------------------------

namespace {

double dbl(const Rational& q) { return to_double(q); }
double dbl(double v) { return v; }
Rational flr(const Rational& q) { return floor(q); }
double flr(double v) { return std::floor(v); }
Rational cl(const Rational& q) { return ceil(q); }
double cl(double v) { return std::ceil(v); }

// Nonincreasing cells (b_{i-1}, b_i] with values v_i >= 0 and integrals X(b_i).
template <typename T>
struct Sorted {
    std::vector<T> breaks;
    std::vector<T> values;
    std::vector<T> cumulative;

    T integral(const T& t) const {
        if (breaks.empty() || t <= T(0)) return T(0);
        auto it = std::lower_bound(breaks.begin(), breaks.end(), t);
        std::size_t i = static_cast<std::size_t>(it - breaks.begin());
        if (i >= breaks.size()) return cumulative.back();
        T left = i == 0 ? T(0) : breaks[i - 1];
        T below = i == 0 ? T(0) : cumulative[i - 1];
        return below + values[i] * (t - left);
    }
};

template <typename T>
Sorted<T> make_sorted(std::vector<T> breaks, std::vector<T> values) {
    Sorted<T> s{std::move(breaks), std::move(values), {}};
    T acc = 0;
    T left = 0;
    s.cumulative.reserve(s.breaks.size());
    for (std::size_t i = 0; i < s.breaks.size(); ++i) {
        acc += s.values[i] * (s.breaks[i] - left);
        left = s.breaks[i];
        s.cumulative.push_back(acc);
    }
    return s;
}

template <typename T>
Sorted<T> unit_average_cells(const Sorted<T>& s) {
    if (s.breaks.empty()) return s;
    std::vector<T> points{T(0)};
    for (const auto& b : s.breaks) {
        points.push_back(flr(b));
        points.push_back(cl(b));
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    std::vector<T> breaks, values;
    for (std::size_t i = 1; i < points.size(); ++i) {
        T v = (s.integral(points[i]) - s.integral(points[i - 1])) / (points[i] - points[i - 1]);
        if (!values.empty() && values.back() == v) {
            breaks.back() = points[i];
        } else {
            breaks.push_back(points[i]);
            values.push_back(v);
        }
    }
    return make_sorted(std::move(breaks), std::move(values));
}

template <typename T>
double evaluate(const Sorted<T>& s, const NormSpec& spec, std::optional<Rational>* exact) {
    if (s.breaks.empty()) {
        if (exact && (spec.kind == NormSpec::Kind::Sup || spec.kind == NormSpec::Kind::L1)) *exact = Rational(0);
        return 0.0;
    }
    switch (spec.kind) {
        case NormSpec::Kind::Sup:
            if constexpr (std::is_same_v<T, Rational>)
                if (exact) *exact = s.values.front();
            return dbl(s.values.front());
        case NormSpec::Kind::L1:
            if constexpr (std::is_same_v<T, Rational>)
                if (exact) *exact = s.cumulative.back();
            return dbl(s.cumulative.back());
        case NormSpec::Kind::Lp: {
            long double acc = 0;
            T left = 0;
            for (std::size_t i = 0; i < s.breaks.size(); ++i) {
                acc += std::pow(static_cast<long double>(dbl(s.values[i])), static_cast<long double>(spec.p)) *
                       static_cast<long double>(dbl(s.breaks[i] - left));
                left = s.breaks[i];
            }
            return static_cast<double>(std::pow(acc, 1.0L / spec.p));
        }
        case NormSpec::Kind::Marcinkiewicz: {
            double best = 0.0;
            for (std::size_t i = 0; i < s.breaks.size(); ++i) {
                double mass = dbl(s.cumulative[i]);
                double w = (*spec.psi)(dbl(s.breaks[i]));
                if (w == 0.0) {
                    require(mass == 0.0, "psi-zero", "weight vanishes at breakpoint " + std::to_string(dbl(s.breaks[i])));
                    continue;
                }
                best = std::max(best, mass / w);
            }
            return best;
        }
        case NormSpec::Kind::Lorentz: {
            long double acc = 0;
            double prev = 0.0;
            for (std::size_t i = 0; i < s.breaks.size(); ++i) {
                double w = (*spec.psi)(dbl(s.breaks[i]));
                acc += static_cast<long double>(dbl(s.values[i])) * (w - prev);
                prev = w;
            }
            return static_cast<double>(acc);
        }
        case NormSpec::Kind::F: {
            double head = dbl(s.values.front());
            return head + evaluate(unit_average_cells(s), *spec.inner, nullptr);
        }
    }
    return 0.0;
}

Sorted<Rational> sorted_of(const StepFn& x) {
    StepFn r = rearrange(x);
    return make_sorted(r.breakpoints(), r.values());
}

}  // namespace

NormValue norm(const StepFn& x, const NormSpec& spec) {
    NormValue out;
    out.value = evaluate(sorted_of(x), spec, &out.exact);
    return out;
}

NormValue norm(const RSeq& x, const NormSpec& spec) {
    if (x.empty()) {
        NormValue out;
        if (spec.kind == NormSpec::Kind::Sup || spec.kind == NormSpec::Kind::L1) out.exact = Rational(0);
        return out;
    }
    return norm(to_stepfn(x), spec);
}

FloatStep rearrange(const FloatStep& x) {
    require(x.breakpoints.size() == x.values.size(), "invalid-input", "float step: size mismatch");
    std::vector<std::pair<double, double>> cells;  // (|value|, length)
    double left = 0.0;
    for (std::size_t i = 0; i < x.breakpoints.size(); ++i) {
        double len = x.breakpoints[i] - left;
        require(len > 0.0 && std::isfinite(x.values[i]), "invalid-input", "float step: bad cell");
        cells.emplace_back(std::abs(x.values[i]), len);
        left = x.breakpoints[i];
    }
    std::stable_sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    FloatStep out;
    double t = 0.0;
    for (const auto& [v, len] : cells) {
        t += len;
        if (!out.values.empty() && out.values.back() == v) {
            out.breakpoints.back() = t;
        } else {
            out.breakpoints.push_back(t);
            out.values.push_back(v);
        }
    }
    return out;
}

double norm(const FloatStep& x, const NormSpec& spec) {
    FloatStep r = rearrange(x);
    return evaluate(make_sorted(std::move(r.breakpoints), std::move(r.values)), spec, nullptr);
}

StepFn unit_averages(const StepFn& x) {
    auto s = unit_average_cells(sorted_of(x));
    return StepFn(std::move(s.breaks), std::move(s.values));
}

RatioProfile psi_ratio_profile(const Psi& psi, double t_lo, double t_hi, int steps) {
    require(t_lo > 0.0 && t_lo < t_hi, "invalid-input", "ratio profile needs 0 < t_lo < t_hi");
    require(steps >= 2, "invalid-input", "ratio profile needs at least 2 steps");
    RatioProfile out;
    out.min = INFINITY;
    double log_lo = std::log(t_lo), log_hi = std::log(t_hi);
    for (int k = 0; k < steps; ++k) {
        double t = k + 1 == steps ? t_hi : std::exp(log_lo + (log_hi - log_lo) * k / (steps - 1));
        double ratio = psi(2 * t) / psi(t);
        out.points.emplace_back(t, ratio);
        out.min = std::min(out.min, ratio);
    }
    return out;
}

}  // namespace symfun
