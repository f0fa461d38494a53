#include "symfun/traces.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "symfun/error.hpp"

namespace symfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr int kDirect = 1000;  // terms summed directly before switching to closed forms

double parse_number(std::string_view text, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    require(ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(v), "invalid-input",
            std::string("malformed ") + what + " '" + std::string(text) + "'");
    return v;
}

// Pairwise summation keeps float reductions independent of accumulation order.
double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

}  // namespace

LimitBracket make_bracket(std::vector<std::pair<double, double>> series, double rel_tol) {
    LimitBracket out;
    out.series = std::move(series);
    if (out.series.empty()) return out;
    std::size_t start = out.series.size() / 2;
    if (out.series.size() == 1) start = 0;
    std::vector<double> tail;
    for (std::size_t i = start; i < out.series.size(); ++i) tail.push_back(out.series[i].second);
    auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
    out.liminf_est = *lo;
    out.limsup_est = *hi;
    out.cesaro = std::clamp(pairwise_sum(tail.data(), tail.size()) / static_cast<double>(tail.size()), *lo, *hi);
    double scale = std::max(std::abs(*lo), std::abs(*hi));
    out.converged = out.width() <= rel_tol * scale;
    return out;
}

// --- generators --------------------------------------------------------------

SeqGenerator SeqGenerator::harmonic() { return power(1.0); }

SeqGenerator SeqGenerator::power(double alpha) {
    require(alpha > 0.0 && std::isfinite(alpha), "invalid-input", "power generator needs alpha > 0");
    SeqGenerator g(alpha == 1.0 ? Kind::Harmonic : Kind::Power);
    g.param_ = alpha;
    g.table_partial_.assign(kDirect + 1, 0.0);
    long double acc = 0;
    for (int k = 1; k <= kDirect; ++k) {
        acc += std::pow(static_cast<long double>(k), -static_cast<long double>(alpha));
        g.table_partial_[static_cast<std::size_t>(k)] = static_cast<double>(acc);
    }
    return g;
}

SeqGenerator SeqGenerator::psi_derivative(Psi psi) {
    SeqGenerator g(Kind::PsiDerivative);
    g.psi_ = std::move(psi);
    return g;
}

SeqGenerator SeqGenerator::geometric(double r) {
    require(r > 0.0 && r < 1.0, "invalid-input", "geometric generator needs 0 < r < 1");
    SeqGenerator g(Kind::Geometric);
    g.param_ = r;
    return g;
}

SeqGenerator SeqGenerator::indicator(long n) {
    require(n >= 0, "invalid-input", "indicator length must be nonnegative");
    SeqGenerator g(Kind::Indicator);
    g.param_ = static_cast<double>(n);
    return g;
}

SeqGenerator SeqGenerator::table(std::vector<double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        require(values[i] >= 0.0 && std::isfinite(values[i]), "invalid-input", "table entries must be >= 0");
        require(i == 0 || values[i] <= values[i - 1], "invalid-input", "table entries must be nonincreasing");
    }
    SeqGenerator g(Kind::Table);
    g.table_partial_.assign(values.size() + 1, 0.0);
    long double acc = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc += values[i];
        g.table_partial_[i + 1] = static_cast<double>(acc);
    }
    g.table_ = std::move(values);
    return g;
}

SeqGenerator SeqGenerator::parse(std::string_view text) {
    if (text == "harmonic") return harmonic();
    if (text.starts_with("pow:")) return power(parse_number(text.substr(4), "exponent"));
    if (text.starts_with("psi:")) return psi_derivative(Psi::parse(text.substr(4)));
    if (text.starts_with("geom:")) return geometric(parse_number(text.substr(5), "ratio"));
    if (text.starts_with("ind:")) return indicator(static_cast<long>(parse_number(text.substr(4), "length")));
    if (text.starts_with("table:")) {
        std::vector<double> values;
        std::string_view rest = text.substr(6);
        while (!rest.empty()) {
            auto comma = rest.find(',');
            values.push_back(to_double(parse_rational(rest.substr(0, comma))));
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        return table(std::move(values));
    }
    throw Error("invalid-input", "unknown sequence generator '" + std::string(text) + "'");
}

double SeqGenerator::term(double k) const {
    require(k >= 1.0, "domain", "sequence index starts at 1");
    k = std::floor(k);
    switch (kind_) {
        case Kind::Harmonic:
            return 1.0 / k;
        case Kind::Power:
            return std::pow(k, -param_);
        case Kind::PsiDerivative:
            switch (psi_->family()) {
                case Psi::Family::Log1p:
                    return std::log1p(1.0 / k);
                case Psi::Family::Power:
                    return -std::pow(k, psi_->alpha()) * std::expm1(psi_->alpha() * std::log1p(-1.0 / k));
                case Psi::Family::Identity:
                    return 1.0;
                case Psi::Family::Table:
                    return (*psi_)(k) - (*psi_)(k - 1);
            }
            return 0.0;
        case Kind::Geometric:
            return std::pow(param_, k);
        case Kind::Indicator:
            return k <= param_ ? 1.0 : 0.0;
        case Kind::Table:
            return k <= static_cast<double>(table_.size()) ? table_[static_cast<std::size_t>(k) - 1] : 0.0;
    }
    return 0.0;
}

double SeqGenerator::partial(double n) const {
    require(n >= 0.0, "domain", "partial sum needs n >= 0");
    n = std::floor(n);
    switch (kind_) {
        case Kind::Harmonic:
            if (n <= kDirect) return table_partial_[static_cast<std::size_t>(n)];
            return std::log(n) + kEulerGamma + 1.0 / (2 * n) - 1.0 / (12 * n * n) + 1.0 / (120 * n * n * n * n);
        case Kind::Power: {
            if (n <= kDirect) return table_partial_[static_cast<std::size_t>(n)];
            // Euler-Maclaurin for sum_{k=a}^{n} k^{-alpha}.
            const double al = param_;
            const double a = kDirect + 1;
            auto f = [al](double t) { return std::pow(t, -al); };
            auto f1 = [al](double t) { return -al * std::pow(t, -al - 1); };
            auto f3 = [al](double t) { return -al * (al + 1) * (al + 2) * std::pow(t, -al - 3); };
            double integral = (std::pow(n, 1 - al) - std::pow(a, 1 - al)) / (1 - al);
            double tail = integral + (f(a) + f(n)) / 2 + (f1(n) - f1(a)) / 12 - (f3(n) - f3(a)) / 720;
            return table_partial_[kDirect] + tail;
        }
        case Kind::PsiDerivative:
            return (*psi_)(n);
        case Kind::Geometric:
            return param_ * (1 - std::pow(param_, n)) / (1 - param_);
        case Kind::Indicator:
            return std::min(n, param_);
        case Kind::Table:
            return table_partial_[static_cast<std::size_t>(std::min(n, static_cast<double>(table_.size())))];
    }
    return 0.0;
}

double SeqGenerator::partial_real(double t) const {
    require(t >= 0.0, "domain", "partial sum needs t >= 0");
    double whole = std::floor(t);
    double frac = t - whole;
    return partial(whole) + (frac > 0 ? frac * term(whole + 1) : 0.0);
}

std::optional<double> SeqGenerator::length() const {
    if (kind_ == Kind::Indicator) return param_;
    if (kind_ == Kind::Table) return static_cast<double>(table_.size());
    return std::nullopt;
}

std::string SeqGenerator::name() const {
    char buf[32];
    auto num = [&](double v) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, ptr);
    };
    switch (kind_) {
        case Kind::Harmonic:
            return "harmonic";
        case Kind::Power:
            return "pow:" + num(param_);
        case Kind::PsiDerivative:
            return "psi:" + psi_->name();
        case Kind::Geometric:
            return "geom:" + num(param_);
        case Kind::Indicator:
            return "ind:" + num(param_);
        case Kind::Table:
            return "table";
    }
    return {};
}

// --- schedules ---------------------------------------------------------------

std::vector<unsigned long> parse_m_schedule(std::string_view text) {
    auto colon = text.find(':');
    require(colon != std::string_view::npos, "invalid-input", "m schedule must be 'base:max_exponent'");
    double base = parse_number(text.substr(0, colon), "schedule base");
    double top = parse_number(text.substr(colon + 1), "schedule exponent");
    require(base >= 2 && base == std::floor(base) && top >= 1 && top == std::floor(top), "invalid-input",
            "m schedule needs integer base >= 2 and exponent >= 1");
    std::vector<unsigned long> out;
    unsigned long m = 1;
    for (int e = 1; e <= static_cast<int>(top); ++e) {
        require(m <= (1UL << 40) / static_cast<unsigned long>(base), "invalid-input", "m schedule too large");
        m *= static_cast<unsigned long>(base);
        out.push_back(m);
    }
    return out;
}

std::vector<double> parse_n_schedule(std::string_view text, int per_decade) {
    auto colon = text.find(':');
    require(colon != std::string_view::npos, "invalid-input", "n schedule must be 'lo:hi'");
    double lo = parse_number(text.substr(0, colon), "schedule bound");
    double hi = parse_number(text.substr(colon + 1), "schedule bound");
    require(lo >= 1 && hi > lo, "invalid-input", "n schedule needs 1 <= lo < hi");
    std::vector<double> out;
    int steps = std::max(1, static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade)));
    for (int k = 0; k <= steps; ++k) {
        double n = std::round(lo * std::pow(hi / lo, static_cast<double>(k) / steps));
        if (out.empty() || n > out.back()) out.push_back(n);
    }
    out.back() = std::round(hi);
    return out;
}

// --- pi ----------------------------------------------------------------------

LimitBracket pi_estimate(const StepFn& x, const NormSpec& spec, const std::vector<unsigned long>& ms) {
    StepFn r = rearrange(x);
    std::vector<std::pair<double, double>> series;
    for (unsigned long m : ms) {
        require(m >= 1, "domain", "schedule entries must be >= 1");
        double value = 0.0;
        if (spec.kind == NormSpec::Kind::Marcinkiewicz) {
            // integral_0^t sigma_m mu = m X(t/m), so (1/m)||sigma_m mu|| = sup_b X(b) / psi(m b).
            for (std::size_t i = 0; i < r.cell_count(); ++i) {
                double mass = to_double(r.integral(r.breakpoints()[i]));
                double w = (*spec.psi)(to_double(r.breakpoints()[i]) * static_cast<double>(m));
                require(w > 0.0 || mass == 0.0, "psi-zero", "weight vanishes at a dilated breakpoint");
                if (w > 0.0) value = std::max(value, mass / w);
            }
        } else {
            value = norm(dilate(r, Rational(m)), spec).value / static_cast<double>(m);
        }
        series.emplace_back(static_cast<double>(m), value);
    }
    return make_bracket(std::move(series));
}

LimitBracket pi_estimate(const RSeq& x, const NormSpec& spec, const std::vector<unsigned long>& ms) {
    if (x.empty()) {
        std::vector<std::pair<double, double>> series;
        for (unsigned long m : ms) series.emplace_back(static_cast<double>(m), 0.0);
        return make_bracket(std::move(series));
    }
    return pi_estimate(to_stepfn(x), spec, ms);
}

LimitBracket pi_estimate(const SeqGenerator& s, const NormSpec& spec, const std::vector<unsigned long>& ms) {
    require(spec.kind == NormSpec::Kind::Marcinkiewicz || spec.kind == NormSpec::Kind::Sup, "invalid-input",
            "generator pi estimates support marc and sup norms only");
    std::vector<std::pair<double, double>> series;
    if (spec.kind == NormSpec::Kind::Sup) {
        for (unsigned long m : ms) series.emplace_back(static_cast<double>(m), s.term(1) / static_cast<double>(m));
        return make_bracket(std::move(series));
    }
    double top = s.length().value_or(1e300);
    std::vector<double> grid;
    for (double n = 1; n < top; n = std::max(n + 1, std::round(n * 1.02))) grid.push_back(n);
    if (top >= 1) grid.push_back(top);
    std::vector<double> partials;
    partials.reserve(grid.size());
    for (double n : grid) partials.push_back(s.partial(n));
    for (unsigned long m : ms) {
        double value = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            value = std::max(value, partials[i] / (*spec.psi)(grid[i] * static_cast<double>(m)));
        series.emplace_back(static_cast<double>(m), value);
    }
    return make_bracket(std::move(series));
}

// --- p -----------------------------------------------------------------------

LimitBracket p_estimate(const SignedStep& x, const NormSpec& spec, const std::vector<unsigned long>& ms,
                        int per_cell) {
    std::vector<std::pair<double, double>> series;
    for (unsigned long m : ms) {
        require(m >= 2, "domain", "p estimates need m >= 2");
        double value = 0.0;
        if (!x.empty()) {
            SmoothEval f = m_avg(x, static_cast<unsigned>(m));
            FloatStep sampled = f.sample(SmoothEval::Part::Positive, per_cell, f.horizon());
            if (!sampled.breakpoints.empty()) value = norm(sampled, spec);
        }
        series.emplace_back(static_cast<double>(m), value);
    }
    return make_bracket(std::move(series));
}

LimitBracket p_estimate(const StepFn& a, const StepFn& b, const NormSpec& spec,
                        const std::vector<unsigned long>& ms, int per_cell) {
    return p_estimate(rearrange(a).as_signed() - rearrange(b).as_signed(), spec, ms, per_cell);
}

// --- Dixmier -----------------------------------------------------------------

LimitBracket dixmier_bracket(const SeqGenerator& s, const Psi& psi, const std::vector<double>& ns) {
    std::vector<std::pair<double, double>> series;
    for (double n : ns) {
        require(n >= 1, "domain", "Dixmier schedule needs n >= 1");
        double w = psi(n);
        require(w > 0.0, "psi-zero", "weight vanishes on the schedule");
        series.emplace_back(n, s.partial(n) / w);
    }
    return make_bracket(std::move(series));
}

// --- criterion ---------------------------------------------------------------

CriterionResult criterion(const Psi& psi, double t_hi, double tol) {
    require(t_hi >= 2.0, "invalid-input", "criterion needs t_hi >= 2");
    CriterionResult out;
    out.profile.min = INFINITY;
    std::vector<double> dyadic_excess;
    for (double t = 1.0; t <= t_hi; t *= 2) {
        double ratio = psi(2 * t) / psi(t);
        out.profile.points.emplace_back(t, ratio);
        out.profile.min = std::min(out.profile.min, ratio);
        dyadic_excess.push_back(ratio - 1.0);
    }
    if (out.profile.points.back().first != t_hi) {
        double ratio = psi(2 * t_hi) / psi(t_hi);
        out.profile.points.emplace_back(t_hi, ratio);
        out.profile.min = std::min(out.profile.min, ratio);
    }

    // Least squares excess_k = L + c / k over the tail half (k counts doublings from 1).
    std::size_t start = dyadic_excess.size() / 2;
    if (start == 0) start = 1;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    out.decreasing = dyadic_excess.size() >= 3;
    for (std::size_t k = start; k < dyadic_excess.size(); ++k) {
        double u = 1.0 / static_cast<double>(k);
        sx += u;
        sy += dyadic_excess[k];
        sxx += u * u;
        sxy += u * dyadic_excess[k];
        ++count;
        if (k > start && !(dyadic_excess[k] < dyadic_excess[k - 1])) out.decreasing = false;
    }
    double denom = count * sxx - sx * sx;
    out.fitted_limit = count >= 2 && denom != 0 ? (sy * sxx - sx * sxy) / denom : dyadic_excess.back();

    bool sampled_hit = out.profile.min <= 1.0 + tol;
    bool trend_hit = out.decreasing && out.fitted_limit <= tol;
    out.positive = sampled_hit || trend_hit;
    out.note = "liminf sampled on the dyadic grid [1, t_hi] only; oscillating weights can be misclassified";
    if (!sampled_hit && trend_hit)
        out.note += "; verdict from the decreasing trend extrapolated to ratio 1 + " + std::to_string(out.fitted_limit);
    return out;
}

// --- Hardy diagnostic --------------------------------------------------------

double hardy_norm(const SignedStep& x, const NormSpec& spec, const Rational& window, int per_cell) {
    require(window > 0, "domain", "window must be positive");
    if (x.empty()) return 0.0;
    SmoothEval f = hardy(x);
    if (spec.kind == NormSpec::Kind::Sup) {
        // |alpha/t + beta| is monotone on every cell, so the sup sits at cell ends.
        double best = std::abs(to_double(x.values().front()));
        for (const auto& c : f.cells()) {
            if (c.left >= window) break;
            best = std::max(best, std::abs(f.value(min(c.right, window))));
        }
        if (window > f.horizon()) best = std::max(best, std::abs(f.value(window)));
        return best;
    }
    int pieces = spec.kind == NormSpec::Kind::L1 ? 1 : per_cell;
    FloatStep sampled = f.sample(SmoothEval::Part::Absolute, pieces, window);
    return sampled.breakpoints.empty() ? 0.0 : norm(sampled, spec);
}

FkResult fk_diagnostic(const SignedStep& x, const NormSpec& spec, const std::vector<Rational>& windows) {
    require(!windows.empty(), "invalid-input", "fk diagnostic needs at least one window");
    FkResult out;
    out.total = x.integral(x.horizon());
    for (const auto& w : windows) out.series.emplace_back(to_double(w), hardy_norm(x, spec, w));
    double first = out.series.front().second;
    double last = out.series.back().second;
    double mid = out.series[out.series.size() / 2].second;
    double tail_growth = mid > 0 ? last / mid - 1.0 : (last > 0 ? INFINITY : 0.0);
    if (last >= 2 * first && last > 0 && tail_growth > 0.05)
        out.verdict = "diverges";
    else if (tail_growth <= 0.05)
        out.verdict = "likely in Z_E";
    else
        out.verdict = "inconclusive";
    return out;
}

FkResult fk_diagnostic(const StepFn& a, const StepFn& b, const NormSpec& spec, const std::vector<Rational>& windows) {
    return fk_diagnostic(rearrange(a).as_signed() - rearrange(b).as_signed(), spec, windows);
}

}  // namespace symfun
