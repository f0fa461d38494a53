#include "symfun/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <thread>

#include "symfun/averaging.hpp"
#include "symfun/error.hpp"
#include "symfun/linalg.hpp"
#include "symfun/majorization.hpp"
#include "symfun/norms.hpp"
#include "symfun/traces.hpp"

namespace symfun {

namespace {

// --- randomness ----------------------------------------------------------------

long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
double unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
bool coin(Rng& rng, double p = 0.5) { return unit(rng) < p; }

Rational ratio(long n, long d) {
    Rational q(n);
    q /= d;
    return q;
}

/// Uniform on the lattice (1/d) Z within [lo, hi], d random in [1, max_den].
Rational small_q(Rng& rng, long lo, long hi, long max_den) {
    long d = uniform(rng, 1, max_den);
    return ratio(uniform(rng, lo * d, hi * d), d);
}

std::size_t cells(Rng& rng, const SuiteConfig& cfg, std::size_t typical) {
    std::size_t cap = std::min<std::size_t>(typical, cfg.max_length);
    if (coin(rng, 0.05)) cap = cfg.max_length;
    return static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(cap)));
}

StepFn generic(Rng& rng, std::size_t k, bool nonincreasing, bool positive) {
    std::vector<Rational> breaks, values;
    Rational t = 0;
    for (std::size_t i = 0; i < k; ++i) {
        t += small_q(rng, 1, 4, 4) / 2;
        breaks.push_back(t);
        values.push_back(positive ? small_q(rng, 1, 8, 3) : coin(rng, 0.2) ? Rational(0) : small_q(rng, 0, 8, 3));
    }
    if (nonincreasing) std::sort(values.begin(), values.end(), std::greater<>());
    return StepFn(std::move(breaks), std::move(values));
}

StepFn slow_growth(Rng& rng, std::size_t k) {
    std::vector<Rational> breaks{Rational(1)}, values{small_q(rng, 1, 4, 2)};
    Rational mass = values[0];
    for (std::size_t i = 1; i < k; ++i) {
        Rational left = breaks.back();
        Rational right = left * uniform(rng, 2, 16);
        Rational len = right - left;
        Rational delta = min(mass / 10, values.back() * len) * ratio(uniform(rng, 1, 4), 4);
        breaks.push_back(right);
        values.push_back(delta / len);
        mass += delta;
    }
    return StepFn(std::move(breaks), std::move(values));
}

StepFn heavy_head(Rng& rng, std::size_t k) {
    Rational head_len = small_q(rng, 1, 2, 2);
    Rational head = small_q(rng, 1, 8, 2);
    std::vector<Rational> breaks{head_len}, values{head};
    if (k > 1) {
        std::vector<Rational> shape, lens;
        Rational rest = 0;
        for (std::size_t i = 1; i < k; ++i) {
            lens.push_back(small_q(rng, 1, 4, 2));
            shape.push_back(small_q(rng, 1, 8, 2));
        }
        std::sort(shape.begin(), shape.end(), std::greater<>());
        for (std::size_t i = 0; i < shape.size(); ++i) rest += shape[i] * lens[i];
        Rational c = head * head_len * ratio(uniform(rng, 1, 8), 8) / (9 * rest);
        c = min(c, head / shape.front());
        Rational t = head_len;
        for (std::size_t i = 0; i < shape.size(); ++i) {
            t += lens[i];
            breaks.push_back(t);
            values.push_back(c * shape[i]);
        }
    }
    return StepFn(std::move(breaks), std::move(values));
}

StepFn flat_tail(Rng& rng, std::size_t k) {
    StepFn body = generic(rng, std::max<std::size_t>(1, k - 1), true, true);
    std::vector<Rational> breaks = body.breakpoints(), values = body.values();
    breaks.push_back(body.horizon() * (10 + uniform(rng, 0, 20)));
    values.push_back(values.back() * ratio(1, uniform(rng, 2, 50)));
    return StepFn(std::move(breaks), std::move(values));
}

Partition random_partition(Rng& rng, const Rational& horizon, std::size_t max_nodes) {
    std::vector<Rational> nodes;
    std::size_t k = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(max_nodes)));
    for (std::size_t i = 0; i < k; ++i) nodes.push_back(horizon * small_q(rng, 1, 24, 1) / 20);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return Partition(std::move(nodes));
}

/// Same cells, shuffled: equimeasurable with x.
StepFn shuffle_cells(Rng& rng, const StepFn& x) {
    std::vector<std::size_t> order(x.cell_count());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Rational> breaks, values;
    Rational t = 0;
    for (std::size_t i : order) {
        t += x.cell_length(i);
        breaks.push_back(t);
        values.push_back(x.values()[i]);
    }
    return StepFn(std::move(breaks), std::move(values));
}

NormSpec random_spec(Rng& rng, bool fully_symmetric) {
    static const char* all[] = {"sup",           "l1",          "lp:2",          "lp:3",
                                "marc:log1p",    "marc:pow:0.5", "lorentz:log1p", "lorentz:pow:0.5",
                                "f:l1",          "f:marc:log1p"};
    std::size_t n = fully_symmetric ? 8 : 10;
    return NormSpec::parse(all[uniform(rng, 0, static_cast<long>(n) - 1)]);
}

// --- bookkeeping -----------------------------------------------------------------

class Check {
public:
    void exact(const Rational& slack, const std::string& what) { note(to_double(slack), slack >= 0, what); }
    void approx(double slack, double tol, const std::string& what) { note(slack, slack >= -tol, what); }
    void holds(bool cond, const std::string& what) { note(cond ? 0.0 : -1.0, cond, what); }
    void report(const MajorizationReport& r, const std::string& what) {
        note(to_double(r.margin), r.verdict, what);
    }

    TrialOutcome done(bool hit = true) const {
        TrialOutcome out;
        out.hit = hit;
        out.ok = ok_;
        out.margin = margin_;
        out.detail = detail_;
        return out;
    }

private:
    void note(double slack, bool ok, const std::string& what) {
        margin_ = std::min(margin_, slack);
        if (!ok && ok_) {
            ok_ = false;
            detail_ = what + " (slack " + format_double(slack) + ")";
        }
    }
    bool ok_ = true;
    double margin_ = std::numeric_limits<double>::infinity();
    std::string detail_;
};

TrialOutcome miss() {
    TrialOutcome out;
    out.hit = false;
    return out;
}

double rel_gap(double lhs, double rhs) { return (rhs - lhs) / std::max(1.0, std::abs(rhs)); }

// --- core ------------------------------------------------------------------------

TrialOutcome rearrange_idempotent(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 12), false, false);
    StepFn r = rearrange(x);
    Check c;
    c.holds(same_function(rearrange(r), r), "rearrange(rearrange(x)) != rearrange(x)");
    c.holds(r.is_nonincreasing(), "rearrangement not nonincreasing");
    std::vector<Rational> levels{Rational(0)};
    for (const auto& v : x.values()) {
        levels.push_back(v);
        levels.push_back(v + ratio(1, 7));
    }
    for (const auto& s : levels)
        c.holds(distribution(x, s) == distribution(r, s), "distribution differs at s=" + to_string(s));
    return c.done();
}

TrialOutcome rearrange_partial_sum(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 12), false, false);
    StepFn r = rearrange(x);
    Check c;
    for (int rep = 0; rep < 6; ++rep) {
        Rational t = 0, mass = 0;
        for (std::size_t i = 0; i < x.cell_count(); ++i)
            if (coin(rng)) {
                t += x.cell_length(i);
                mass += x.cell_length(i) * x.values()[i];
            }
        c.exact(partial_sum(r, t).value - mass, "cell subset of measure " + to_string(t));
    }
    return c.done();
}

TrialOutcome dilation_partial_sum(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 12), false, false);
    Rational s = coin(rng) ? Rational(uniform(rng, 1, 6)) : small_q(rng, 1, 6, 4);
    StepFn d = dilate(x, s);
    Check c;
    for (int rep = 0; rep < 6; ++rep) {
        Rational t = x.horizon() * small_q(rng, 0, 6, 5) / 5;
        c.holds(partial_sum(d, s * t).value == s * partial_sum(x, t).value, "function identity at t=" + to_string(t));
    }
    std::vector<Rational> seq;
    std::size_t n = cells(rng, cfg, 12);
    for (std::size_t i = 0; i < n; ++i) seq.push_back(small_q(rng, 0, 8, 3));
    std::sort(seq.begin(), seq.end(), std::greater<>());
    RSeq q(seq);
    unsigned m = static_cast<unsigned>(uniform(rng, 1, 5));
    RSeq dq = dilate(q, m);
    for (int rep = 0; rep < 6; ++rep) {
        Rational t = small_q(rng, 0, static_cast<long>(n), 4);
        c.holds(partial_sum(dq, m * t).value == m * partial_sum(q, t).value, "sequence identity at t=" + to_string(t));
    }
    return c.done();
}

RSeq random_rseq(Rng& rng, std::size_t n) {
    std::vector<Rational> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(small_q(rng, 0, 8, 3));
    std::sort(v.begin(), v.end(), std::greater<>());
    return RSeq(std::move(v));
}

TrialOutcome direct_sum_algebra(Rng& rng, const SuiteConfig& cfg) {
    RSeq x = random_rseq(rng, cells(rng, cfg, 10));
    RSeq y = random_rseq(rng, cells(rng, cfg, 10));
    RSeq z = random_rseq(rng, cells(rng, cfg, 10));
    Check c;
    c.holds(direct_sum(x, y) == direct_sum(y, x), "not commutative");
    c.holds(direct_sum(direct_sum(x, y), z) == direct_sum(x, direct_sum(y, z)), "not associative");
    return c.done();
}

// --- norms -----------------------------------------------------------------------

void compare_norms(Check& c, const NormValue& small, const NormValue& big, double tol, const std::string& what) {
    if (small.exact && big.exact)
        c.exact(*big.exact - *small.exact, what);
    else
        c.approx(rel_gap(small.value, big.value), tol, what);
}

TrialOutcome norm_symmetry(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 12), false, false);
    NormSpec spec = random_spec(rng, false);
    NormValue a = norm(x, spec), b = norm(rearrange(x), spec), d = norm(shuffle_cells(rng, x), spec);
    Check c;
    compare_norms(c, a, b, cfg.tol.norm_rel, spec.to_string() + ": norm(x) > norm(mu(x))");
    compare_norms(c, b, a, cfg.tol.norm_rel, spec.to_string() + ": norm(mu(x)) > norm(x)");
    compare_norms(c, d, a, cfg.tol.norm_rel, spec.to_string() + ": shuffled cells change the norm");
    compare_norms(c, a, d, cfg.tol.norm_rel, spec.to_string() + ": shuffled cells change the norm");
    return c.done();
}

TrialOutcome norm_monotone(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 12), false, false);
    std::vector<Rational> values;
    for (const auto& v : x.values()) values.push_back(v * ratio(uniform(rng, 0, 8), 8));
    StepFn y(x.breakpoints(), values);
    NormSpec spec = random_spec(rng, false);
    Check c;
    compare_norms(c, norm(y, spec), norm(x, spec), cfg.tol.norm_rel, spec.to_string());
    return c.done();
}

TrialOutcome norm_triangle(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 10), false, false);
    StepFn y = generic(rng, cells(rng, cfg, 10), false, false);
    NormSpec spec = random_spec(rng, false);
    NormValue nx = norm(x, spec), ny = norm(y, spec), nxy = norm(add(x, y), spec);
    Check c;
    if (nx.exact && ny.exact && nxy.exact)
        c.exact(*nx.exact + *ny.exact - *nxy.exact, spec.to_string());
    else
        c.approx(rel_gap(nxy.value, nx.value + ny.value), cfg.tol.norm_rel, spec.to_string());
    return c.done();
}

TrialOutcome marcinkiewicz_dilation(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 12), false, false);
    Psi psi = coin(rng) ? Psi::log1p() : Psi::power(static_cast<double>(uniform(rng, 1, 4)) / 4);
    NormSpec spec = NormSpec::marcinkiewicz(psi);
    unsigned m = static_cast<unsigned>(uniform(rng, 2, 8));
    Check c;
    c.approx(rel_gap(norm(dilate(x, Rational(m)), spec).value, m * norm(x, spec).value), cfg.tol.norm_rel,
             spec.to_string() + " m=" + std::to_string(m));
    return c.done();
}

TrialOutcome unit_average_triangle(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 10), false, true);
    StepFn y = generic(rng, cells(rng, cfg, 10), false, true);
    NormSpec spec = random_spec(rng, true);
    double lhs = norm(unit_averages(add(x, y)), spec).value;
    double rhs = norm(unit_averages(x), spec).value + norm(unit_averages(y), spec).value;
    Check c;
    c.approx(rel_gap(lhs, rhs), cfg.tol.norm_rel, spec.to_string());
    return c.done();
}

// --- majorization ----------------------------------------------------------------

TrialOutcome uniform_implies_submajor(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 8), true, false);
    StepFn y = x;
    if (coin(rng, 0.7)) {
        unsigned m = static_cast<unsigned>(uniform(rng, 1, 4));
        y = scale(dilate(x, Rational(m)), ratio(1, m));
    } else {
        y = generic(rng, cells(rng, cfg, 8), false, false);
    }
    Check c;
    UniformReport u = uniform_submajorize(y, x, 8);
    bool hit = u.witness.has_value();
    if (hit) c.report(submajorize(y, x), "function pair with witness " + std::to_string(*u.witness));

    RSeq q = random_rseq(rng, cells(rng, cfg, 10));
    unsigned m = static_cast<unsigned>(uniform(rng, 1, 3));
    std::vector<Rational> shrunk;
    RSeq stretched = dilate(q, m);
    for (const auto& v : stretched.values()) shrunk.push_back(v / m);
    RSeq p(std::move(shrunk));
    UniformReport us = uniform_submajorize(p, q, 8);
    if (us.witness) {
        hit = true;
        c.report(submajorize(p, q), "sequence pair with witness " + std::to_string(*us.witness));
    }
    return hit ? c.done() : miss();
}

TrialOutcome submajor_preorder(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 10), false, false);
    Check c;
    c.report(submajorize(x, x), "reflexivity");
    StepFn y = scale(expectation(x, random_partition(rng, x.horizon(), 4)), ratio(uniform(rng, 4, 8), 8));
    StepFn z = add(x, generic(rng, cells(rng, cfg, 6), false, false));
    if (coin(rng, 0.3)) y = generic(rng, cells(rng, cfg, 8), false, false);
    bool hit = submajorize(y, x).verdict && submajorize(x, z).verdict;
    if (hit) c.report(submajorize(y, z), "transitivity");
    return c.done(hit);
}

TrialOutcome pointwise_submajor(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 12), false, false);
    std::vector<Rational> values;
    for (const auto& v : x.values()) values.push_back(v * ratio(uniform(rng, 0, 8), 8));
    StepFn y(x.breakpoints(), values);
    Check c;
    c.report(submajorize(y, x), "y <= x pointwise");
    return c.done();
}

TrialOutcome submajor_scaling(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 10), false, false);
    StepFn y = coin(rng) ? expectation(x, random_partition(rng, x.horizon(), 4))
                         : generic(rng, cells(rng, cfg, 10), false, false);
    Rational k = small_q(rng, 1, 9, 7);
    Check c;
    c.holds(submajorize(y, x).verdict == submajorize(scale(y, k), scale(x, k)).verdict,
            "verdict changes under scaling by " + to_string(k));
    return c.done();
}

// --- averaging: exact ------------------------------------------------------------

TrialOutcome expectation_contraction(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 12), false, false);
    Partition part = random_partition(rng, x.horizon(), 6);
    Beyond beyond = coin(rng) ? Beyond::Keep : Beyond::Drop;
    StepFn e = expectation(x, part, beyond);
    Check c;
    c.report(submajorize(e, x), "E(x|P) <<= x");
    const Rational& last = part.nodes().back();
    c.holds(e.integral(last) == x.integral(last), "mass not preserved up to the last node");
    return c.done();
}

TrialOutcome expectation_union(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 12), true, false);
    int k = static_cast<int>(uniform(rng, 1, 4));
    Beyond beyond = coin(rng) ? Beyond::Keep : Beyond::Drop;
    Partition all;
    std::optional<StepFn> sum;
    for (int i = 0; i < k; ++i) {
        Partition p = random_partition(rng, x.horizon(), 4);
        all = merge(all, p);
        StepFn e = expectation(x, p, beyond);
        sum = sum ? add(*sum, e) : e;
    }
    Check c;
    c.report(submajorize(expectation(x, all, beyond), *sum), "union of " + std::to_string(k) + " node sets");
    return c.done();
}

struct KappaDraw {
    KappaSeq kappa;
    KappaSeq other;
};

TrialOutcome majorant(Rng& rng, const SuiteConfig& cfg, bool remark) {
    StepFn x = slow_growth(rng, cells(rng, cfg, 14));
    // Anchor theta to the total mass so that several a_{3n} exist inside the window.
    Rational theta = x.integral(x.horizon()) * pow(ratio(2, 3), uniform(rng, 1, 7)) * ratio(uniform(rng, 3, 5), 4);
    int width = static_cast<int>(uniform(rng, 1, cfg.kappa_window));
    ANodes a = a_nodes(x, theta, -6);
    int top = a.nodes.empty() ? 0 : (a.nodes.rbegin()->first - 1) / 3;
    int lo = std::min(static_cast<int>(uniform(rng, -2, 0)), top - width + 1);
    std::vector<std::optional<long>> big, small;
    if (!remark) {
        for (int i = 0; i < width; ++i) {
            // Mostly keep kappa_n^2 below a_{3n+1}/a_{3n} so the node is present.
            auto left = a.at(3 * (lo + i)), right = a.at(3 * (lo + i) + 1);
            long cap = 0;
            if (left && right && *left > 0)
                while (cap < 8 && (cap + 1) * (cap + 1) * *left < *right) ++cap;
            if (cap > 0 && coin(rng, 0.7)) {
                long b = uniform(rng, 1, cap);
                big.push_back(b);
                small.push_back(uniform(rng, 1, b));
                continue;
            }
            std::optional<long> s = coin(rng, 0.2) ? std::nullopt : std::optional<long>(uniform(rng, 1, 5));
            std::optional<long> b = (!s || coin(rng, 0.15)) ? std::nullopt : std::optional<long>(*s + uniform(rng, 0, 3));
            small.push_back(s);
            big.push_back(b);
        }
    } else {
        for (int i = 0; i < width; ++i)
            big.push_back(coin(rng, 0.2) ? std::nullopt : std::optional<long>(uniform(rng, 1, 6)));
    }
    KappaSeq kappa(lo, big);
    NodeSet nodes = build_B(x, kappa, theta);
    if (nodes.partition.empty()) return miss();
    if (remark) {
        // kappa' is arbitrary except below kappa on the indices that produced nodes.
        for (int i = 0; i < width; ++i) {
            int n = lo + i;
            bool used = std::find(nodes.indices.begin(), nodes.indices.end(), n) != nodes.indices.end();
            if (used)
                small.push_back(uniform(rng, 1, *kappa.at(n)));
            else
                small.push_back(coin(rng, 0.2) ? std::nullopt : std::optional<long>(uniform(rng, 1, 9)));
        }
    }
    KappaSeq other(lo, small);
    StepFn lhs = expectation(x, nodes.partition, Beyond::Drop);
    StepFn rhs = scale(expectation(x, build_B(x, other, theta).partition, Beyond::Drop), ratio(3, 2));
    Check c;
    c.report(submajorize(lhs, rhs), "kappa=" + kappa.to_string() + " kappa'=" + other.to_string());
    return c.done();
}

// A head of value about 1, then one or two very low plateaus: a_{3n+1}(theta)
// overshoots a_{3n}(theta) by far more than (300 m)^2.
struct Plateau {
    StepFn x = StepFn::indicator(1);
    Rational theta;
};

Plateau plateau(Rng& rng, unsigned m) {
    std::vector<Rational> breaks, values;
    Rational c0 = small_q(rng, 1, 3, 2);
    long pieces = uniform(rng, 1, 3);
    Rational mass = 0;
    for (long j = 1; j <= pieces; ++j) {
        breaks.push_back(c0 * j / pieces);
        values.push_back(1 - ratio(j - 1, 16));
        mass += values.back() * c0 / pieces;
    }
    Rational theta = mass * ratio(uniform(rng, 12, 15), 16);
    Rational eps1 = ratio(1, 10'000'000L * m * m * uniform(rng, 1, 4));
    breaks.push_back(breaks.back() + (4 * theta - mass) / eps1);
    values.push_back(eps1);
    if (coin(rng)) {
        Rational eps2 = eps1 / (10'000'000L * m * m * uniform(rng, 1, 4));
        breaks.push_back(breaks.back() + 2 * theta / eps2);
        values.push_back(eps2);
    }
    return {StepFn(std::move(breaks), std::move(values)), theta};
}

struct ShiftInstance {
    Plateau p;
    unsigned m = 1;
    KappaSeq kappa;
    StepFn u = StepFn::indicator(1);
};

/// Draws (x, kappa, theta, m) and scales a random u to (nearly) the smallest
/// multiple for which the shifted hypothesis holds. nullopt when no tried scale works.
std::optional<ShiftInstance> shift_instance(Rng& rng, const SuiteConfig& cfg) {
    ShiftInstance s;
    s.m = static_cast<unsigned>(uniform(rng, 1, 3));
    s.p = plateau(rng, s.m);
    long big = 100L * s.m;
    int lo = -1;
    int width = std::min(4, cfg.kappa_window);
    std::vector<std::optional<long>> k;
    for (int i = 0; i < width; ++i) {
        double r = unit(rng);
        if (r < 0.25)
            k.push_back(uniform(rng, 1, big - 1));
        else if (r < 0.85)
            k.push_back(uniform(rng, big, 3 * big));
        else
            k.push_back(std::nullopt);
    }
    s.kappa = KappaSeq(lo, k);

    const StepFn& x = s.p.x;
    Rational reach = x.horizon() * s.m * uniform(rng, 1, 3);
    std::vector<Rational> ub, uv;
    long pieces = uniform(rng, 1, 6);
    for (long j = 0; j < pieces; ++j) ub.push_back(reach / pow(Rational(2), uniform(rng, 0, 48)));
    ub.push_back(reach);
    std::sort(ub.begin(), ub.end());
    ub.erase(std::unique(ub.begin(), ub.end()), ub.end());
    for (std::size_t j = 0; j < ub.size(); ++j) uv.push_back(small_q(rng, 1, 8, 1));
    StepFn shape(ub, uv);

    SignedStep e = expectation(x, build_B(x, s.kappa, s.p.theta).partition, Beyond::Drop).as_signed();
    Rational mr(s.m);
    auto holds = [&](const Rational& scale_factor) {
        SignedStep rhs = x.as_signed() + scale_factor * shape.as_signed();
        return shifted_integral_check(e, rhs, mr, mr).verdict;
    };
    Rational hi = pow(Rational(2), -40);
    int steps = 0;
    while (!holds(hi)) {
        hi *= 4;
        if (++steps > 40) return std::nullopt;
    }
    Rational lo_s = steps == 0 ? Rational(0) : hi / 4;
    for (int i = 0; i < 5; ++i) {
        Rational mid = (lo_s + hi) / 2;
        if (holds(mid))
            hi = mid;
        else
            lo_s = mid;
    }
    s.u = scale(shape, hi);
    return s;
}

TrialOutcome shift_estimate(Rng& rng, const SuiteConfig& cfg) {
    auto s = shift_instance(rng, cfg);
    if (!s) return miss();
    const StepFn& x = s->p.x;
    KappaSeq cut = kappa_truncate(s->kappa, 100.0 * s->m);
    StepFn e = expectation(x, build_B(x, cut, s->p.theta).partition, Beyond::Drop);
    StepFn lhs = scale(dilate(e, Rational(s->m)), ratio(1, s->m));
    Check c;
    c.report(submajorize(lhs, scale(s->u, 30)), "m=" + std::to_string(s->m) + " kappa=" + s->kappa.to_string());
    return c.done();
}

TrialOutcome shift_estimate_chain(Rng& rng, const SuiteConfig& cfg) {
    auto s = shift_instance(rng, cfg);
    if (!s) return miss();
    const StepFn& x = s->p.x;
    long base = 100L * s->m;
    Check c;
    for (long lambda : {base, base + uniform(rng, 1, base), base * uniform(rng, 2, 4)}) {
        KappaSeq cut = kappa_truncate(s->kappa, static_cast<double>(lambda));
        StepFn e = expectation(x, build_B(x, cut, s->p.theta).partition, Beyond::Drop);
        StepFn lhs = scale(dilate(e, Rational(lambda)), ratio(1, lambda));
        c.report(submajorize(lhs, scale(s->u, 45)), "lambda=" + std::to_string(lambda) + " kappa=" + s->kappa.to_string());
    }
    return c.done();
}

int floor_log15(const Rational& v) {
    return static_cast<int>(std::floor(std::log(to_double(v)) / std::log(1.5)));
}

std::vector<Rational> clipped(std::vector<Rational> pts, const Rational& lo, const std::optional<Rational>& hi) {
    std::vector<Rational> out;
    for (auto& p : pts)
        if (p >= lo && (!hi || p <= *hi)) out.push_back(std::move(p));
    out.push_back(lo);
    if (hi) out.push_back(*hi);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct GrowthSetup {
    StepFn x;
    unsigned m;
    Rational m4;
    int n_min;
    ANodes a;
    StepFn e;
    std::vector<Rational> kinks;  ///< every t where some term of the inequality bends
};

std::optional<GrowthSetup> growth_setup(Rng& rng, const SuiteConfig& cfg, StepFn x) {
    GrowthSetup g{std::move(x), static_cast<unsigned>(uniform(rng, 2, 3)), 0, 0, {}, StepFn::indicator(1), {}};
    g.m4 = pow(Rational(g.m), 4);
    g.n_min = std::clamp(floor_log15(g.x.integral(g.x.breakpoints().front())) - 2, -200, 200);
    g.a = a_nodes(g.x, 1, g.n_min);
    if (g.a.nodes.size() < 3) return std::nullopt;
    NodeSet am = build_A_m(g.x, g.m, g.n_min);
    g.e = expectation(g.x, am.partition, Beyond::Drop);
    for (const auto& b : g.x.breakpoints()) {
        g.kinks.push_back(b);
        g.kinks.push_back(b / g.m4);
    }
    for (const auto& b : g.e.breakpoints()) g.kinks.push_back(b / g.m4);
    for (const auto& [n, t] : g.a.nodes) g.kinks.push_back(t);
    (void)cfg;
    return g;
}

StepFn growth_input(Rng& rng, const SuiteConfig& cfg) {
    double r = unit(rng);
    if (r < 0.6) return slow_growth(rng, cells(rng, cfg, 14));
    if (r < 0.8) return flat_tail(rng, cells(rng, cfg, 10));
    return generic(rng, cells(rng, cfg, 12), true, true);
}

TrialOutcome growth_estimate(Rng& rng, const SuiteConfig& cfg) {
    auto g = growth_setup(rng, cfg, growth_input(rng, cfg));
    if (!g) return miss();
    int n_max = g->a.nodes.rbegin()->first;
    Rational t_lo = g->a.nodes.begin()->second;
    Rational t_hi = min(g->x.horizon() / g->m4, *g->a.at(n_max - 1));
    if (t_lo > t_hi) return miss();
    Check c;
    for (const auto& t : clipped(g->kinks, t_lo, t_hi)) {
        Rational s = g->m4 * t;
        Rational slack = ratio(2, 3) * g->x.integral(s) + ratio(3, 2) * g->e.integral(s) - g->x.integral(t);
        c.exact(slack, "m=" + std::to_string(g->m) + " t=" + to_string(t));
    }
    return c.done();
}

TrialOutcome growth_estimate_integrable(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = coin(rng) ? heavy_head(rng, cells(rng, cfg, 10)) : growth_input(rng, cfg);
    auto g = growth_setup(rng, cfg, std::move(x));
    if (!g) return miss();
    Rational total = g->x.integral(g->x.horizon());
    std::optional<std::pair<int, Rational>> n0;
    for (const auto& [n, t] : g->a.nodes)
        if (g->x.integral(t) <= ratio(4, 9) * total) n0 = {n, t};
    if (!n0) return miss();
    Rational constant = total / min(n0->second, Rational(1));
    auto pts = g->kinks;
    pts.push_back(1 / g->m4);
    pts.push_back(g->x.horizon());
    Check c;
    for (const auto& t : clipped(pts, g->a.nodes.begin()->second, std::nullopt)) {
        Rational s = g->m4 * t;
        Rational slack = ratio(2, 3) * g->x.integral(s) + ratio(3, 2) * g->e.integral(s) +
                         constant * min(s, Rational(1)) - g->x.integral(t);
        c.exact(slack, "n0=" + std::to_string(n0->first) + " t=" + to_string(t));
    }
    return c.done();
}

TrialOutcome dilation_average(Rng& rng, const SuiteConfig& cfg) {
    StepFn y = generic(rng, cells(rng, cfg, 12), true, false);
    long k = uniform(rng, 0, 4);
    Rational two_k = pow(Rational(2), k);
    Rational lambda = 1 + small_q(rng, 1, 32, 8) / 8;
    StepFn dy = dilate(y, two_k);
    Check c;
    for (int rep = 0; rep < 10; ++rep) {
        Rational a = y.horizon() * small_q(rng, 1, 12, 4) / 8;
        Rational b = lambda * a + y.horizon() * small_q(rng, 0, 8, 4) / 4;
        Rational lhs = y.integral(lambda * a / two_k, b);
        Rational rhs = lambda / (lambda - 1) * dy.integral(a, b);
        c.exact(rhs - lhs, "k=" + std::to_string(k) + " lambda=" + to_string(lambda) + " a=" + to_string(a) +
                               " b=" + to_string(b));
    }
    return c.done();
}

TrialOutcome unit_average_uniform(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 8), false, true);
    StepFn y = generic(rng, cells(rng, cfg, 8), false, true);
    Rational reach = max(x.horizon(), y.horizon());
    Partition unit = unit_partition(static_cast<std::size_t>(ceil(reach).get_num().get_ui()));
    StepFn sum = expectation(rearrange(add(x, y)), unit);
    StepFn parts = add(expectation(rearrange(x), unit), expectation(rearrange(y), unit));
    StepFn doubled = scale(dilate(sum, ratio(1, 2)), 2);
    UniformReport first = uniform_submajorize(sum, parts, 8);
    UniformReport second = uniform_submajorize(parts, doubled, 8);
    Check c;
    c.holds(first.witness.has_value(), "E(mu(x+y)) vs E(mu x)+E(mu y): no witness m <= 8");
    c.holds(second.witness.has_value(), "E(mu x)+E(mu y) vs 2 sigma_1/2 E(mu(x+y)): no witness m <= 8");
    if (first.witness) c.report(first.report, "first relation");
    if (second.witness) c.report(second.report, "second relation");
    return c.done();
}

TrialOutcome differences_hardy_bound(Rng& rng, const SuiteConfig& cfg) {
    long n = uniform(rng, 1, 3);
    SignedStep x;
    std::vector<StepFn> ys;
    for (long k = 0; k < n; ++k) {
        StepFn xk = generic(rng, cells(rng, cfg, 6), false, true);
        StepFn yk = shuffle_cells(rng, xk);
        x = x + (xk.as_signed() - yk.as_signed());
        ys.push_back(yk);
    }
    StepFn plus = rearrange(positive_part(x));
    StepFn minus = rearrange(negative_part(x));
    StepFn z = positive_part(x);
    for (const auto& y : ys) z = add(z, y);
    StepFn mz = rearrange(z);
    auto grid = merge_breakpoints(merge_breakpoints(plus.breakpoints(), minus.breakpoints()), mz.breakpoints());
    Check c;
    Rational left = 0;
    for (const auto& right : grid) {
        Rational bound = n * mz.value_at(right);  // mu(z) on (left, right]
        for (const Rational& t : {left, right}) {
            Rational d = plus.integral(t) - minus.integral(t);
            if (d < 0) d = -d;
            c.exact(bound * t - d, "n=" + std::to_string(n) + " t=" + to_string(t));
        }
        left = right;
    }
    c.holds(plus.integral(left) == minus.integral(left), "total mass of x is not zero");
    return c.done();
}

TrialOutcome dyadic_identity(Rng& rng, const SuiteConfig& cfg) {
    auto draw = [&]() {
        StepFn f = generic(rng, cells(rng, cfg, 8), true, false);
        std::vector<Rational> breaks = f.breakpoints();
        Rational shift = 1 - min(breaks.front(), Rational(1));  // constant on (0, 1]
        for (auto& b : breaks) b += shift;
        return StepFn(breaks, f.values());
    };
    StepFn a = draw(), b = draw();
    SignedStep x = a.as_signed() - b.as_signed();
    int hi = 0;
    while (pow(Rational(2), hi) < x.horizon()) ++hi;
    SignedStep x1 = expectation(x, dyadic_partition(0, hi));
    std::vector<Rational> zb, zv;
    zb.push_back(1);
    zv.push_back(hardy_value(x1, 1));
    for (int n = 0; n <= hi + 1; ++n) {
        Rational r = pow(Rational(2), n + 1);
        zb.push_back(r);
        zv.push_back(hardy_value(x1, r));
    }
    SignedStep z(zb, zv);
    Rational reach = pow(Rational(2), hi + 2);
    SignedStep rhs = head_truncate(Rational(2) * z - dilate(z, Rational(2)), reach);
    Check c;
    c.holds(same_function(head_truncate(x1, reach), rhs), "x1 != 2z - sigma_2 z, hi=" + std::to_string(hi));
    return c.done();
}

// --- averaging: float ------------------------------------------------------------

StepFn normalized(const StepFn& x) {
    Rational top = *std::max_element(x.values().begin(), x.values().end());
    return top > 0 ? scale(x, 1 / top) : x;
}

TrialOutcome log_mean_sandwich(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = normalized(generic(rng, cells(rng, cfg, 10), false, false));
    unsigned m = static_cast<unsigned>(uniform(rng, 2, 6));
    SmoothEval mx = m_avg(x, m);
    Check c;
    for (int rep = 0; rep < 12; ++rep) {
        Rational a = coin(rng, 0.2) ? Rational(0) : x.horizon() * small_q(rng, 1, 8, 4) / 8;
        Rational b = m * a + x.horizon() * small_q(rng, 0, 8, 4) / 4;
        if (b == 0) continue;
        double mid = mx.integral(a, b);
        std::string at = "m=" + std::to_string(m) + " a=" + to_string(a) + " b=" + to_string(b);
        c.approx(mid - to_double(x.integral(a, b / m)), cfg.tol.float_abs, "lower, " + at);
        c.approx(to_double(x.integral(a / m, b)) - mid, cfg.tol.float_abs, "upper, " + at);
    }
    return c.done();
}

TrialOutcome log_mean_uniform(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = normalized(generic(rng, cells(rng, cfg, 7), true, false));
    unsigned m = static_cast<unsigned>(uniform(rng, 2, 5));
    SmoothEval mx = m_avg(x, m);
    std::vector<Rational> grid{Rational(0)};
    for (const auto& b : x.breakpoints()) {
        grid.push_back(b);
        grid.push_back(b * m);
        grid.push_back(b / m);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    Check c;
    for (const auto& a : grid)
        for (const auto& b : grid) {
            if (m * a > b || b == 0) continue;
            std::string at = "m=" + std::to_string(m) + " a=" + to_string(a) + " b=" + to_string(b);
            // m^{-1} sigma_m x |> M_m x: integral_{ma}^b of the left equals integral_a^{b/m} x.
            c.approx(mx.integral(a, b) - to_double(x.integral(a, b / m)), cfg.tol.float_abs, "left, " + at);
            c.approx(to_double(x.integral(a, b)) - mx.integral(m * a, b), cfg.tol.float_abs, "right, " + at);
        }
    return c.done();
}

TrialOutcome hardy_log_mean_monotone(Rng& rng, const SuiteConfig& cfg) {
    StepFn a = generic(rng, cells(rng, cfg, 6), true, false);
    StepFn b = generic(rng, cells(rng, cfg, 6), true, false);
    StepFn w = generic(rng, cells(rng, cfg, 6), true, false);
    SignedStep x = a.as_signed() - b.as_signed();
    SignedStep z = x + (w.as_signed() - expectation(w, random_partition(rng, w.horizon(), 4)).as_signed());
    if (coin(rng, 0.25)) z = x + generic(rng, cells(rng, cfg, 4), false, false).as_signed();
    Rational top = 0;
    for (const auto* f : {&x, &z})
        for (const auto& v : f->values()) top = max(top, v < 0 ? Rational(-v) : v);
    if (top > 0) {
        x = (1 / top) * x;
        z = (1 / top) * z;
    }
    auto grid = merge_breakpoints(x.breakpoints(), z.breakpoints());
    for (const auto& t : grid)
        if (z.integral(t) < x.integral(t)) return miss();
    unsigned m = static_cast<unsigned>(uniform(rng, 2, 5));
    SmoothEval mx = m_avg(x, m), mz = m_avg(z, m);
    std::vector<Rational> pts = grid;
    for (const auto& t : grid) pts.push_back(t * m);
    for (int rep = 0; rep < 5; ++rep) pts.push_back(grid.back() * m * small_q(rng, 1, 16, 3) / 16);
    Check c;
    for (const auto& t : pts) {
        if (t <= 0) continue;
        double gap = (mz.integral(Rational(0), t) - mx.integral(Rational(0), t)) / to_double(t);
        c.approx(gap, cfg.tol.float_abs, "m=" + std::to_string(m) + " t=" + to_string(t));
    }
    return c.done();
}

// --- traces ----------------------------------------------------------------------

std::vector<unsigned long> small_schedule() { return {2, 4, 8, 16}; }

TrialOutcome pi_convexity(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 8), true, false);
    StepFn y = generic(rng, cells(rng, cfg, 8), true, false);
    NormSpec spec = coin(rng) ? NormSpec::parse("marc:log1p") : random_spec(rng, true);
    auto ms = small_schedule();
    auto px = pi_estimate(x, spec, ms), py = pi_estimate(y, spec, ms), pxy = pi_estimate(add(x, y), spec, ms);
    Check c;
    for (std::size_t i = 0; i < ms.size(); ++i)
        c.approx(rel_gap(pxy.series[i].second, px.series[i].second + py.series[i].second), cfg.tol.norm_rel,
                 spec.to_string() + " m=" + std::to_string(ms[i]));
    return c.done();
}

TrialOutcome pi_dilation(Rng& rng, const SuiteConfig& cfg) {
    StepFn x = generic(rng, cells(rng, cfg, 8), true, false);
    unsigned long k = static_cast<unsigned long>(uniform(rng, 2, 4));
    NormSpec spec = NormSpec::marcinkiewicz(coin(rng) ? Psi::log1p() : Psi::power(0.5));
    auto ms = small_schedule();
    std::vector<unsigned long> matched;
    for (auto m : ms) matched.push_back(m * k);
    auto dil = pi_estimate(dilate(x, Rational(k)), spec, ms);
    auto base = pi_estimate(x, spec, matched);
    Check c;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        double lhs = dil.series[i].second, rhs = k * base.series[i].second;
        double gap = std::abs(lhs - rhs) / std::max(1e-300, std::abs(rhs));
        c.approx(-gap, 1e-12, spec.to_string() + " k=" + std::to_string(k) + " m=" + std::to_string(ms[i]));
    }
    return c.done();
}

TrialOutcome p_below_norm(Rng& rng, const SuiteConfig& cfg) {
    StepFn a = generic(rng, cells(rng, cfg, 6), true, false);
    StepFn b = generic(rng, cells(rng, cfg, 6), true, false);
    static const char* specs[] = {"marc:log1p", "l1", "lp:2", "sup"};
    NormSpec spec = NormSpec::parse(specs[uniform(rng, 0, 3)]);
    auto p = p_estimate(a, b, spec, {2, 4, 8}, 16);
    double bound = norm(rearrange(a.as_signed() - b.as_signed()), spec).value;
    Check c;
    for (const auto& [m, v] : p.series)
        c.approx(rel_gap(v, bound), 1e-9, spec.to_string() + " m=" + format_double(m));
    return c.done();
}

TrialOutcome dixmier_trace_class(Rng& rng, const SuiteConfig&) {
    bool geometric = coin(rng);
    double param = geometric ? 0.1 + 0.8 * unit(rng) : 1.2 + 1.8 * unit(rng);
    SeqGenerator s = geometric ? SeqGenerator::geometric(param) : SeqGenerator::power(param);
    double total = geometric ? param / (1 - param) : 1 + 1 / (param - 1);
    std::vector<double> ns{1e2, 1e4, 1e8, 1e16, 1e64, 1e300};
    auto br = dixmier_bracket(s, Psi::log1p(), ns);
    Check c;
    for (const auto& [n, xi] : br.series)
        c.approx(total / std::log1p(n) * (1 + 1e-12) - xi, 0.0, s.name() + " n=" + format_double(n));
    c.holds(br.series.back().second <= br.series.front().second, s.name() + ": xi_n not decreasing");
    return c.done();
}

// --- linalg ----------------------------------------------------------------------

Matrix random_matrix(Rng& rng, std::size_t n, double scale) {
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = (2 * unit(rng) - 1) * scale;
    return a;
}

Matrix random_psd(Rng& rng, std::size_t n) {
    Matrix g = random_matrix(rng, n, 1.0 / std::sqrt(static_cast<double>(n)));
    return g.transpose() * g;
}

Matrix random_orthogonal(Rng& rng, std::size_t n) {
    Matrix q = random_matrix(rng, n, 1.0);
    for (int pass = 0; pass < 2; ++pass)
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                double dot = 0;
                for (std::size_t i = 0; i < n; ++i) dot += q(i, j) * q(i, k);
                for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, k);
            }
            double len = 0;
            for (std::size_t i = 0; i < n; ++i) len += q(i, j) * q(i, j);
            len = std::sqrt(len);
            for (std::size_t i = 0; i < n; ++i) q(i, j) /= len;
        }
    return q;
}

/// Square roots of the eigenvalues of A^T A, by cyclic two-sided Jacobi in
/// extended precision. Independent of the one-sided routine under test.
std::vector<double> gram_oracle(const Matrix& a) {
    const std::size_t n = a.size();
    std::vector<std::vector<long double>> g(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) g[i][j] += static_cast<long double>(a(k, i)) * a(k, j);
    for (int sweep = 0; sweep < 100; ++sweep) {
        long double off = 0, diag = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) (i == j ? diag : off) += g[i][j] * g[i][j];
        if (off <= 1e-36L * diag || off == 0) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (g[p][q] == 0) continue;
                long double theta = (g[q][q] - g[p][p]) / (2 * g[p][q]);
                long double t = (theta >= 0 ? 1.0L : -1.0L) / (std::fabs(theta) + std::sqrt(1 + theta * theta));
                long double c = 1 / std::sqrt(1 + t * t), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    long double gkp = g[k][p], gkq = g[k][q];
                    g[k][p] = c * gkp - s * gkq;
                    g[k][q] = s * gkp + c * gkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    long double gpk = g[p][k], gqk = g[q][k];
                    g[p][k] = c * gpk - s * gqk;
                    g[q][k] = s * gpk + c * gqk;
                }
            }
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<double>(std::sqrt(std::max(0.0L, g[i][i]))));
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

std::vector<double> prefix(const std::vector<double>& v) {
    std::vector<double> out{0.0};
    for (double x : v) out.push_back(out.back() + x);
    return out;
}

/// Partial sum at real t >= 0 of the step model with unit cells.
double partial_at(const std::vector<double>& pre, double t) {
    double n = static_cast<double>(pre.size() - 1);
    if (t >= n) return pre.back();
    std::size_t k = static_cast<std::size_t>(std::floor(t));
    return pre[k] + (t - k) * (pre[k + 1] - pre[k]);
}

struct PsdPair {
    std::size_t n;
    std::vector<double> sum_mu;  ///< mu(A) + mu(B)
    std::vector<double> mu_sum;  ///< mu(A + B)
};

PsdPair psd_pair(Rng& rng, const SuiteConfig& cfg) {
    std::size_t n = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(cfg.max_matrix)));
    Matrix a = random_psd(rng, n), b = random_psd(rng, n);
    auto sa = singular_values(a), sb = singular_values(b);
    PsdPair p{n, {}, singular_values(a + b)};
    for (std::size_t i = 0; i < n; ++i) p.sum_mu.push_back(sa[i] + sb[i]);
    return p;
}

TrialOutcome rearranged_sum(Rng& rng, const SuiteConfig& cfg) {
    PsdPair p = psd_pair(rng, cfg);
    auto s_sum = prefix(p.sum_mu), s_ab = prefix(p.mu_sum);
    Check c;
    for (std::size_t j = 1; j <= 2 * p.n; ++j) {
        double t = j / 2.0;
        c.approx(partial_at(s_sum, t) - partial_at(s_ab, t), cfg.tol.matrix_abs,
                 "mu(A+B) <<= mu(A)+mu(B) at t=" + format_double(t));
        c.approx(partial_at(s_ab, 2 * t) - partial_at(s_sum, t), cfg.tol.matrix_abs,
                 "mu(A)+mu(B) <<= 2 sigma_1/2 mu(A+B) at t=" + format_double(t));
    }
    return c.done();
}

TrialOutcome shifted_sum(Rng& rng, const SuiteConfig& cfg) {
    PsdPair p = psd_pair(rng, cfg);
    auto s_sum = prefix(p.sum_mu), s_ab = prefix(p.mu_sum);
    Check c;
    for (std::size_t a = 0; 2 * a <= 2 * p.n; ++a)
        for (std::size_t b = 2 * a; b <= 2 * p.n; ++b) {
            double A = static_cast<double>(a), B = static_cast<double>(b);
            std::string at = " a=" + std::to_string(a) + " b=" + std::to_string(b);
            c.approx((partial_at(s_sum, B) - partial_at(s_sum, A)) - (partial_at(s_ab, B) - partial_at(s_ab, 2 * A)),
                     cfg.tol.matrix_abs, "first" + at);
            c.approx((partial_at(s_ab, 2 * B) - partial_at(s_ab, 2 * A)) -
                         (partial_at(s_sum, B) - partial_at(s_sum, 2 * A)),
                     cfg.tol.matrix_abs, "companion" + at);
        }
    return c.done();
}

TrialOutcome unitary_invariance(Rng& rng, const SuiteConfig& cfg) {
    std::size_t n = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(cfg.max_matrix)));
    Matrix a = random_matrix(rng, n, 1.0);
    auto base = singular_values(a);
    auto moved = singular_values(random_orthogonal(rng, n) * a * random_orthogonal(rng, n));
    double scale = std::max(1.0, base.front());
    Check c;
    for (std::size_t i = 0; i < n; ++i)
        c.approx(-std::abs(base[i] - moved[i]) / scale, cfg.tol.unitary, "index " + std::to_string(i));
    return c.done();
}

TrialOutcome svd_gram_oracle(Rng& rng, const SuiteConfig& cfg) {
    std::size_t n = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(cfg.max_matrix)));
    Matrix a = random_matrix(rng, n, std::pow(10.0, uniform(rng, -3, 3)));
    auto got = singular_values(a);
    auto want = gram_oracle(a);
    double top = std::max(want.front(), std::numeric_limits<double>::min());
    Check c;
    for (std::size_t i = 0; i < n; ++i)
        c.approx(-std::abs(got[i] - want[i]) / top, cfg.tol.svd_rel, "index " + std::to_string(i));
    return c.done();
}

TrialOutcome direct_sum_coherence(Rng& rng, const SuiteConfig& cfg) {
    std::size_t n = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(cfg.max_matrix)));
    unsigned m = static_cast<unsigned>(uniform(rng, 2, static_cast<long>(std::min<std::size_t>(8, kMaxMatrixSize / n))));
    Matrix a = random_matrix(rng, n, 1.0);
    RSeq blocks = to_rseq(singular_values(op_direct_sum(a, m)));
    RSeq stretched = dilate(to_rseq(singular_values(a)), m);
    NormSpec spec = NormSpec::parse("marc:log1p");
    std::vector<unsigned long> ms{1, 2, 4};
    auto lhs = pi_estimate(blocks, spec, ms), rhs = pi_estimate(stretched, spec, ms);
    Check c;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        double l = lhs.series[i].second, r = rhs.series[i].second;
        c.approx(-std::abs(l - r) / std::max(1e-300, std::abs(r)), cfg.tol.coherence_rel,
                 "m-fold sum, m=" + std::to_string(m) + " schedule point " + std::to_string(ms[i]));
    }
    return c.done();
}

// --- registry --------------------------------------------------------------------

using TrialFn = std::function<TrialOutcome(Rng&, const SuiteConfig&)>;

struct Registered {
    PropertyInfo info;
    TrialFn fn;
};

const std::vector<Registered>& registry() {
    using K = PropertyKind;
    static const std::vector<Registered> all = {
        {{"rearrange-idempotent", K::Exact, false, "mu(mu(x)) = mu(x); distribution function preserved"},
         rearrange_idempotent},
        {{"rearrange-partial-sum", K::Exact, false, "integral of x over any union of cells <= partial sum of mu(x)"},
         rearrange_partial_sum},
        {{"dilation-partial-sum", K::Exact, false, "partial_sum(sigma_s x, s t) = s partial_sum(x, t)"},
         dilation_partial_sum},
        {{"direct-sum-algebra", K::Exact, false, "direct sum commutative and associative"}, direct_sum_algebra},
        {{"norm-symmetry", K::Float, false, "norm(x) = norm(mu(x))"}, norm_symmetry},
        {{"norm-monotone", K::Float, false, "0 <= y <= x implies norm(y) <= norm(x)"}, norm_monotone},
        {{"norm-triangle", K::Float, false, "norm(x + y) <= norm(x) + norm(y)"}, norm_triangle},
        {{"marcinkiewicz-dilation", K::Float, false, "norm(sigma_m x) <= m norm(x)"}, marcinkiewicz_dilation},
        {{"unit-average-triangle", K::Float, false,
          "norm(E(mu(x+y)|unit)) <= norm(E(mu x|unit)) + norm(E(mu y|unit))"},
         unit_average_triangle},
        {{"uniform-implies-submajor", K::Exact, true, "y |> x with any witness implies y <<= x"},
         uniform_implies_submajor},
        {{"submajor-preorder", K::Exact, true, "<<= is reflexive and transitive"}, submajor_preorder},
        {{"pointwise-submajor", K::Exact, false, "y <= x pointwise implies y <<= x"}, pointwise_submajor},
        {{"submajor-scaling", K::Exact, false, "c y <<= c x iff y <<= x"}, submajor_scaling},
        {{"expectation-contraction", K::Exact, false, "E(x|P) <<= x, mass preserved up to the last node"},
         expectation_contraction},
        {{"expectation-union", K::Exact, false, "E(x|C_1 u ... u C_k) <<= sum E(x|C_i)"}, expectation_union},
        {{"majorant-three-halves", K::Exact, true, "kappa >= kappa' implies E(x|B_kappa) <<= 3/2 E(x|B_kappa')"},
         [](Rng& r, const SuiteConfig& c) { return majorant(r, c, false); }},
        {{"majorant-three-halves-weak", K::Exact, true,
          "same, with kappa >= kappa' only where kappa_n^2 a_3n < a_3n+1"},
         [](Rng& r, const SuiteConfig& c) { return majorant(r, c, true); }},
        {{"shift-estimate-30", K::Exact, true,
          "shifted hypothesis implies m^-1 sigma_m E(x|B_kappa^100m) <<= 30 mu(u)"},
         shift_estimate},
        {{"shift-estimate-45", K::Exact, true,
          "shifted hypothesis implies lambda^-1 sigma_lambda E(x|B_kappa^lambda) <<= 45 mu(u), lambda >= 100m"},
         shift_estimate_chain},
        {{"growth-estimate", K::Exact, true, "X(t) <= 2/3 X(m^4 t) + 3/2 int_0^{m^4 t} E(x|A_m)"}, growth_estimate},
        {{"growth-estimate-integrable", K::Exact, true,
          "same plus C min(m^4 t, 1), C = X(T) / min(a_n0, 1)"},
         growth_estimate_integrable},
        {{"dilation-average", K::Exact, false,
          "int_{2^-k lambda a}^b y <= lambda/(lambda-1) int_a^b sigma_{2^k} y for b >= lambda a"},
         dilation_average},
        {{"unit-average-uniform", K::Exact, false,
          "E(mu(x+y)) |> E(mu x) + E(mu y) |> 2 sigma_1/2 E(mu(x+y)) on unit cells"},
         unit_average_uniform},
        {{"differences-hardy-bound", K::Exact, false, "|C(mu(x+) - mu(x-))| <= n mu(z)"}, differences_hardy_bound},
        {{"dyadic-identity", K::Exact, false, "E(x|dyadic) = 2z - sigma_2 z"}, dyadic_identity},
        {{"log-mean-sandwich", K::Float, false, "int_a^{b/m} x <= int_a^b M_m x <= int_{a/m}^b x"},
         log_mean_sandwich},
        {{"log-mean-uniform", K::Float, false, "m^-1 sigma_m x |> M_m x |> x with witness m"}, log_mean_uniform},
        {{"hardy-log-mean-monotone", K::Float, true, "Cx <= Cz implies C M_m x <= C M_m z"},
         hardy_log_mean_monotone},
        {{"pi-convexity", K::Float, false, "pi series of x + y <= pi series of x + pi series of y"}, pi_convexity},
        {{"pi-dilation", K::Float, false, "pi series of sigma_k x at m = k times pi series of x at mk"},
         pi_dilation},
        {{"p-below-norm", K::Float, false, "norm((M_m x)_+) <= norm(mu(a) - mu(b))"}, p_below_norm},
        {{"dixmier-trace-class", K::Float, false, "xi_n <= sum(s) / psi(n) -> 0 for summable s"},
         dixmier_trace_class},
        {{"rearranged-sum", K::Float, false, "mu(A+B) <<= mu(A)+mu(B) <<= 2 sigma_1/2 mu(A+B), PSD"},
         rearranged_sum},
        {{"shifted-sum", K::Float, false, "int_{2a}^b mu(A+B) <= int_a^b (mu A + mu B) and companion"},
         shifted_sum},
        {{"unitary-invariance", K::Float, false, "singular values of UAV equal those of A"}, unitary_invariance},
        {{"svd-gram-oracle", K::Float, false, "one-sided Jacobi matches eigenvalues of A^T A"}, svd_gram_oracle},
        {{"direct-sum-coherence", K::Float, false, "pi series of A (+) ... (+) A equals that of sigma_m mu(A)"},
         direct_sum_coherence},
    };
    return all;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

Rng trial_rng(std::uint64_t seed, std::string_view name, unsigned trial) {
    std::uint64_t h = fnv1a(name);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32), trial};
    return Rng(seq);
}

TrialOutcome run_trial(const Registered& prop, std::uint64_t seed, unsigned trial, const SuiteConfig& cfg) {
    Rng rng = trial_rng(seed, prop.info.name, trial);
    try {
        return prop.fn(rng, cfg);
    } catch (const std::exception& e) {
        TrialOutcome out;
        out.ok = false;
        out.margin = -std::numeric_limits<double>::infinity();
        out.detail = std::string("exception: ") + e.what();
        return out;
    }
}

unsigned thread_count(std::size_t tasks) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SYMFUN_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) n = static_cast<unsigned>(v);
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, tasks)));
}

}  // namespace

// --- public ----------------------------------------------------------------------

void SuiteConfig::validate() const {
    require(max_length >= 1 && max_length <= 64, "invalid-input", "sequence length cap must lie in [1, 64]");
    require(max_matrix >= 1 && max_matrix <= 16, "invalid-input", "matrix size cap must lie in [1, 16]");
    require(kappa_window >= 1 && kappa_window <= 8, "invalid-input", "kappa window must lie in [1, 8]");
    for (const auto& name : only) {
        bool known = std::any_of(registry().begin(), registry().end(),
                                 [&](const Registered& r) { return r.info.name == name; });
        require(known, "invalid-input", "unknown property '" + name + "'");
    }
}

const std::vector<PropertyInfo>& property_catalog() {
    static const std::vector<PropertyInfo> out = [] {
        std::vector<PropertyInfo> v;
        for (const auto& r : registry()) v.push_back(r.info);
        return v;
    }();
    return out;
}

unsigned SuiteReport::total_violations() const {
    unsigned n = 0;
    for (const auto& p : properties) n += p.violations;
    return n;
}

const PropertyReport* SuiteReport::find(std::string_view name) const {
    for (const auto& p : properties)
        if (p.info.name == name) return &p;
    return nullptr;
}

SuiteReport run_suite(const SuiteConfig& cfg) {
    cfg.validate();
    auto start = std::chrono::steady_clock::now();
    std::vector<const Registered*> chosen;
    for (const auto& r : registry())
        if (cfg.only.empty() || std::find(cfg.only.begin(), cfg.only.end(), r.info.name) != cfg.only.end())
            chosen.push_back(&r);

    const std::size_t tasks = chosen.size() * cfg.trials;
    std::vector<TrialOutcome> outcomes(tasks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks; i = next++)
            outcomes[i] = run_trial(*chosen[i / cfg.trials], cfg.seed, static_cast<unsigned>(i % cfg.trials), cfg);
    };
    unsigned threads = thread_count(tasks);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    SuiteReport report;
    report.config = cfg;
    for (std::size_t p = 0; p < chosen.size(); ++p) {
        PropertyReport pr;
        pr.info = chosen[p]->info;
        for (unsigned t = 0; t < cfg.trials; ++t) {
            const TrialOutcome& o = outcomes[p * cfg.trials + t];
            ++pr.trials;
            if (!o.hit) continue;
            ++pr.hits;
            pr.worst_margin = std::min(pr.worst_margin, o.margin);
            if (!o.ok) {
                ++pr.violations;
                if (pr.failures.size() < 5) pr.failures.push_back({pr.info.name, cfg.seed, t, o.margin, o.detail});
            }
        }
        pr.under_sampled = pr.info.conditional && pr.hits < std::min(cfg.min_hits, cfg.trials);
        report.properties.push_back(std::move(pr));
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

TrialOutcome replay(std::string_view property, std::uint64_t seed, unsigned trial, const SuiteConfig& cfg) {
    for (const auto& r : registry())
        if (r.info.name == property) return run_trial(r, seed, trial, cfg);
    throw Error("invalid-input", "unknown property '" + std::string(property) + "'");
}

json to_json(const SuiteReport& report) {
    json props = json::array();
    for (const auto& p : report.properties) {
        json failures = json::array();
        for (const auto& f : p.failures)
            failures.push_back({{"property", f.property},
                                {"seed", f.seed},
                                {"trial", f.trial},
                                {"margin", std::isfinite(f.margin) ? json(f.margin) : json(nullptr)},
                                {"detail", f.detail}});
        props.push_back({{"name", p.info.name},
                         {"kind", p.info.kind == PropertyKind::Exact ? "exact" : "float"},
                         {"conditional", p.info.conditional},
                         {"statement", p.info.statement},
                         {"trials", p.trials},
                         {"hits", p.hits},
                         {"violations", p.violations},
                         {"worst_margin", std::isfinite(p.worst_margin) ? json(p.worst_margin) : json(nullptr)},
                         {"under_sampled", p.under_sampled},
                         {"failures", failures}});
    }
    return json{{"seed", report.config.seed},
                {"trials", report.config.trials},
                {"total_violations", report.total_violations()},
                {"seconds", report.seconds},
                {"properties", props}};
}

// --- generators ------------------------------------------------------------------

Profile parse_profile(std::string_view text) {
    if (text == "generic") return Profile::Generic;
    if (text == "slow-growth") return Profile::SlowGrowth;
    if (text == "heavy-head") return Profile::HeavyHead;
    if (text == "flat-tail") return Profile::FlatTail;
    throw Error("invalid-input", "unknown profile '" + std::string(text) + "'");
}

std::string to_string(Profile p) {
    switch (p) {
        case Profile::Generic: return "generic";
        case Profile::SlowGrowth: return "slow-growth";
        case Profile::HeavyHead: return "heavy-head";
        case Profile::FlatTail: return "flat-tail";
    }
    return {};
}

StepFn gen_stepfn(Rng& rng, Profile profile, std::size_t max_cells, bool nonincreasing) {
    require(max_cells >= 1, "invalid-input", "need at least one cell");
    std::size_t k = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(max_cells)));
    switch (profile) {
        case Profile::Generic: return generic(rng, k, nonincreasing, false);
        case Profile::SlowGrowth: return slow_growth(rng, std::max<std::size_t>(k, 2));
        case Profile::HeavyHead: return heavy_head(rng, k);
        case Profile::FlatTail: return flat_tail(rng, std::max<std::size_t>(k, 2));
    }
    return generic(rng, k, nonincreasing, false);
}

StepFn gen_stepfn(std::uint64_t seed, Profile profile, std::size_t max_cells, bool nonincreasing) {
    Rng rng = trial_rng(seed, "gen:" + to_string(profile), 0);
    return gen_stepfn(rng, profile, max_cells, nonincreasing);
}

}  // namespace symfun
