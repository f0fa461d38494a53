#include "symfun/averaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "symfun/error.hpp"

namespace symfun {

// --- expectation -------------------------------------------------------------

SignedStep expectation(const SignedStep& x, const Partition& part, Beyond beyond) {
    if (part.empty()) {
        if (beyond == Beyond::Keep) return x;
        Rational horizon = x.empty() ? Rational(1) : x.horizon();
        return SignedStep({horizon}, {Rational(0)});
    }
    std::vector<Rational> breaks, values;
    Rational left = 0;
    for (const auto& node : part.nodes()) {
        breaks.push_back(node);
        values.push_back(x.integral(left, node) / (node - left));
        left = node;
    }
    if (beyond == Beyond::Keep) {
        for (std::size_t i = 0; i < x.cell_count(); ++i) {
            if (x.breakpoints()[i] <= left) continue;
            breaks.push_back(x.breakpoints()[i]);
            values.push_back(x.values()[i]);
        }
    }
    return canonical(SignedStep(std::move(breaks), std::move(values)));
}

StepFn expectation(const StepFn& x, const Partition& part, Beyond beyond) {
    return StepFn::from_signed(expectation(x.as_signed(), part, beyond), x.tail() && beyond == Beyond::Keep);
}

StepFn expectation(const RSeq& x, const Partition& part, Beyond beyond) {
    return expectation(to_stepfn(x), part, beyond);
}

// --- SmoothEval --------------------------------------------------------------

SmoothEval::SmoothEval(std::vector<Cell> cells, double scale, Rational tail)
    : cells_(std::move(cells)), scale_(scale), tail_(std::move(tail)) {
    Rational left = 0;
    for (const auto& c : cells_) {
        require(c.left == left && c.right > c.left, "invalid-input", "smooth cells must tile (0, H]");
        left = c.right;
    }
}

double SmoothEval::value(const Rational& t) const {
    require(t > 0, "domain", "evaluation at t <= 0");
    auto it = std::lower_bound(cells_.begin(), cells_.end(), t,
                               [](const Cell& c, const Rational& v) { return c.right < v; });
    if (it == cells_.end()) return scale_ * to_double(tail_ / t);
    return scale_ * to_double(it->alpha / t + it->beta);
}

double SmoothEval::value(double t) const {
    require(t > 0.0, "domain", "evaluation at t <= 0");
    return value(from_double(t));
}

namespace {

// integral_u^w (alpha / t + beta) dt for 0 <= u < w; alpha must vanish when u = 0.
long double piece_integral(const Rational& alpha, const Rational& beta, const Rational& u, const Rational& w) {
    long double out = static_cast<long double>(to_double(beta * (w - u)));
    if (alpha != 0) {
        require(u > 0, "domain", "logarithmic term integrated from 0");
        long double log_ratio = std::log1p(static_cast<long double>(to_double((w - u) / u)));
        out += static_cast<long double>(to_double(alpha)) * log_ratio;
    }
    return out;
}

}  // namespace

double SmoothEval::integral(const Rational& a, const Rational& b) const {
    require(a >= 0 && a <= b, "domain", "integral needs 0 <= a <= b");
    long double acc = 0;
    for (const auto& c : cells_) {
        Rational lo = max(a, c.left), hi = min(b, c.right);
        if (lo < hi) acc += piece_integral(c.alpha, c.beta, lo, hi);
    }
    Rational h = horizon();
    if (b > h && tail_ != 0) {
        Rational lo = max(a, h);
        require(lo > 0, "domain", "tail integral from 0");
        acc += piece_integral(tail_, Rational(0), lo, b);
    }
    return static_cast<double>(acc) * scale_;
}

FloatStep SmoothEval::sample(Part part, int per_cell, const Rational& upto) const {
    require(per_cell >= 1, "invalid-input", "per_cell must be >= 1");
    require(upto > 0, "domain", "sampling window must be positive");
    FloatStep out;
    auto emit = [&](const Rational& alpha, const Rational& beta, const Rational& l, const Rational& r) {
        // Exact average of f_+ or |f| over (u, w]; f changes sign at most once.
        auto average = [&](const Rational& u, const Rational& w) {
            long double whole = piece_integral(alpha, beta, u, w);
            long double pos = whole;
            if (beta != 0 && alpha != 0) {
                Rational root = -alpha / beta;
                if (root > u && root < w) {
                    long double first = piece_integral(alpha, beta, u, root);
                    long double second = whole - first;
                    pos = std::max(first, 0.0L) + std::max(second, 0.0L);
                    if (part == Part::Absolute) pos = std::abs(first) + std::abs(second);
                    return static_cast<double>(pos / static_cast<long double>(to_double(w - u)));
                }
            }
            pos = part == Part::Absolute ? std::abs(whole) : std::max(whole, 0.0L);
            return static_cast<double>(pos / static_cast<long double>(to_double(w - u)));
        };
        if (l == 0 || alpha == 0) {
            out.breakpoints.push_back(to_double(r));
            out.values.push_back(average(l, r) * scale_);
            return;
        }
        double log_span = std::log(to_double(r / l));
        Rational u = l;
        for (int j = 1; j <= per_cell; ++j) {
            Rational w = j == per_cell ? r : l * from_double(std::exp(log_span * j / per_cell));
            if (w <= u) continue;
            out.breakpoints.push_back(to_double(w));
            out.values.push_back(average(u, w) * scale_);
            u = w;
        }
    };
    for (const auto& c : cells_) {
        if (c.left >= upto) break;
        emit(c.alpha, c.beta, c.left, min(c.right, upto));
    }
    Rational h = horizon();
    if (upto > h) {
        if (h == 0) {
            out.breakpoints.push_back(to_double(upto));
            out.values.push_back(0.0);
        } else {
            emit(tail_, Rational(0), h, upto);
        }
    }
    // Drop cells that collapsed in double precision.
    FloatStep clean;
    double prev = 0.0;
    for (std::size_t i = 0; i < out.breakpoints.size(); ++i) {
        if (out.breakpoints[i] <= prev) continue;
        clean.breakpoints.push_back(out.breakpoints[i]);
        clean.values.push_back(out.values[i]);
        prev = out.breakpoints[i];
    }
    return clean;
}

// --- Hardy and logarithmic means ---------------------------------------------

Rational hardy_value(const SignedStep& x, const Rational& t) {
    require(t > 0, "domain", "Hardy operator evaluated at t <= 0");
    return x.integral(t) / t;
}

SmoothEval hardy(const SignedStep& x) {
    std::vector<SmoothEval::Cell> cells;
    for (std::size_t i = 0; i < x.cell_count(); ++i) {
        Rational l = x.cell_left(i);
        const Rational& v = x.values()[i];
        cells.push_back({l, x.breakpoints()[i], x.integral(l) - v * l, v});
    }
    return SmoothEval(std::move(cells), 1.0, x.integral(x.horizon()));
}

SmoothEval m_avg(const SignedStep& x, unsigned m) {
    require(m >= 2, "domain", "logarithmic mean needs m >= 2");
    Rational mq(m);
    std::vector<Rational> grid = x.breakpoints();
    std::vector<Rational> scaled;
    for (const auto& b : x.breakpoints()) scaled.push_back(b * mq);
    grid = merge_breakpoints(grid, scaled);
    std::vector<SmoothEval::Cell> cells;
    Rational left = 0;
    for (const auto& right : grid) {
        // On (left, right] both X(t) and X(t/m) are affine in t.
        Rational v1 = x.value_at(right);
        Rational v2 = x.value_at(right / mq);
        Rational a1 = x.integral(left) - v1 * left;
        Rational a2 = x.integral(left / mq) - v2 * (left / mq);
        cells.push_back({left, right, a1 - a2, v1 - v2 / mq});
        left = right;
    }
    return SmoothEval(std::move(cells), 1.0 / std::log(static_cast<double>(m)), Rational(0));
}

// --- level-set nodes ---------------------------------------------------------

std::optional<Rational> ANodes::at(int n) const {
    auto it = nodes.find(n);
    if (it == nodes.end()) return std::nullopt;
    return it->second;
}

ANodes a_nodes(const StepFn& x, const Rational& theta, int n_min) {
    require(theta > 0, "domain", "theta must be positive");
    require(x.is_nonincreasing(), "invalid-input", "a_n(theta) needs a nonincreasing input");
    ANodes out;
    Rational total = x.integral(x.horizon());
    out.below_theta = total < theta;
    const Rational ratio(3, 2);
    Rational level = theta * pow(ratio, n_min);
    std::size_t cell = 0;
    for (int n = n_min; level <= total; ++n, level *= ratio) {
        while (x.integral(x.breakpoints()[cell]) < level) ++cell;
        Rational l = x.cell_left(cell);
        out.nodes.emplace(n, l + (level - x.integral(l)) / x.values()[cell]);
    }
    return out;
}

KappaSeq::KappaSeq(int n_min, std::vector<std::optional<long>> values) : n_min_(n_min), values_(std::move(values)) {
    for (const auto& v : values_)
        require(!v || *v >= 1, "invalid-input", "kappa entries must be >= 1 or infinity");
}

KappaSeq KappaSeq::constant(long kappa, int n_min, int n_max) {
    require(n_max >= n_min, "invalid-input", "empty kappa window");
    return KappaSeq(n_min, std::vector<std::optional<long>>(static_cast<std::size_t>(n_max - n_min + 1), kappa));
}

KappaSeq KappaSeq::parse(std::string_view text, int n_min) {
    std::vector<std::optional<long>> values;
    while (!text.empty()) {
        auto comma = text.find(',');
        std::string item(text.substr(0, comma));
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        if (item == "inf" || item == "∞" || item == "infinity") {
            values.emplace_back(std::nullopt);
        } else {
            Rational v = parse_rational(item);
            require(is_integer(v) && v >= 1 && v.get_num().fits_slong_p(), "invalid-input",
                    "kappa entry '" + item + "' is not a positive integer");
            values.emplace_back(v.get_num().get_si());
        }
        text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    }
    require(!values.empty(), "invalid-input", "empty kappa list");
    return KappaSeq(n_min, std::move(values));
}

std::optional<long> KappaSeq::at(int n) const {
    if (n < n_min_ || n > n_max()) return std::nullopt;
    return values_[static_cast<std::size_t>(n - n_min_)];
}

std::string KappaSeq::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) out += ',';
        out += values_[i] ? std::to_string(*values_[i]) : "inf";
    }
    return out;
}

KappaSeq kappa_truncate(const KappaSeq& kappa, double lambda) {
    require(lambda > 0.0, "domain", "lambda must be positive");
    std::vector<std::optional<long>> values = kappa.values();
    for (auto& v : values)
        if (v && static_cast<double>(*v) < lambda) v.reset();
    return KappaSeq(kappa.n_min(), std::move(values));
}

NodeSet build_B(const StepFn& x, const KappaSeq& kappa, const Rational& theta) {
    NodeSet out;
    if (kappa.values().empty()) return out;
    ANodes a = a_nodes(x, theta, 3 * kappa.n_min());
    std::vector<Rational> nodes;
    for (int n = kappa.n_min(); n <= kappa.n_max(); ++n) {
        auto k = kappa.at(n);
        if (!k) continue;
        auto lo = a.at(3 * n), hi = a.at(3 * n + 1);
        if (!lo || !hi) {
            if (x.tail()) out.window_truncated = true;
            continue;
        }
        Rational kq(*k);
        if (kq * kq * *lo < *hi) {
            nodes.push_back(kq * *lo);
            out.indices.push_back(n);
        }
    }
    out.partition = Partition(std::move(nodes));
    return out;
}

NodeSet build_A_m(const StepFn& x, unsigned m, int n_min) {
    require(m >= 1, "domain", "m must be >= 1");
    NodeSet out;
    ANodes a = a_nodes(x, Rational(1), n_min);
    Rational mq(m);
    std::vector<Rational> nodes;
    for (const auto& [n, an] : a.nodes) {
        auto next = a.at(n + 1);
        if (!next) {
            if (x.tail()) out.window_truncated = true;
            continue;
        }
        if (mq * mq * an < *next) {
            nodes.push_back(mq * an);
            out.indices.push_back(n);
        }
    }
    out.partition = Partition(std::move(nodes));
    return out;
}

Partition dyadic_partition(int lo, int hi) {
    require(lo <= hi, "invalid-input", "empty dyadic range");
    std::vector<Rational> nodes;
    for (int k = lo; k <= hi; ++k) nodes.push_back(pow(Rational(2), k));
    return Partition(std::move(nodes));
}

}  // namespace symfun
