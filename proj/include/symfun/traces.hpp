#pragma once

// Trace-side quantities evaluated as limit brackets: the dilation functional,
// the logarithmic-mean functional, Dixmier means, the weight criterion, and
// the Hardy-operator diagnostic.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symfun/averaging.hpp"
#include "symfun/norms.hpp"

namespace symfun {

struct LimitBracket {
    std::vector<std::pair<double, double>> series;  ///< (index, value)
    double liminf_est = 0.0;
    double limsup_est = 0.0;
    double cesaro = 0.0;
    bool converged = false;

    double width() const { return limsup_est - liminf_est; }
};

/// Bracket over the tail half of the series. Converged when the width is at
/// most rel_tol times the larger endpoint magnitude.
LimitBracket make_bracket(std::vector<std::pair<double, double>> series, double rel_tol = 0.05);

/// Closed-form nonincreasing sequences s_1, s_2, ... with partial sums valid
/// up to n ~ 1e300.
class SeqGenerator {
public:
    enum class Kind { Harmonic, Power, PsiDerivative, Geometric, Indicator, Table };

    static SeqGenerator harmonic();
    /// k^{-alpha}, alpha > 0.
    static SeqGenerator power(double alpha);
    /// psi(k) - psi(k-1); partial sums are psi(n).
    static SeqGenerator psi_derivative(Psi psi);
    /// r^k, 0 < r < 1.
    static SeqGenerator geometric(double r);
    /// 1 for k <= n, 0 beyond.
    static SeqGenerator indicator(long n);
    static SeqGenerator table(std::vector<double> values);
    /// "harmonic", "pow:0.5", "psi:log1p", "geom:0.5", "ind:100", "table:1,0.5,0.25".
    static SeqGenerator parse(std::string_view text);

    double term(double k) const;
    /// sum_{k <= floor(n)} s_k.
    double partial(double n) const;
    /// partial(floor(t)) + frac(t) s_{ceil(t)}.
    double partial_real(double t) const;
    /// Support length for finitely supported families.
    std::optional<double> length() const;
    std::string name() const;

private:
    explicit SeqGenerator(Kind k) : kind_(k) {}
    Kind kind_;
    double param_ = 1.0;
    std::optional<Psi> psi_;
    std::vector<double> table_;
    std::vector<double> table_partial_;
};

/// "b:e" -> b^1, b^2, ..., b^e.
std::vector<unsigned long> parse_m_schedule(std::string_view text);
/// "lo:hi" -> geometric grid of integers from lo to hi, `per_decade` points per decade.
std::vector<double> parse_n_schedule(std::string_view text, int per_decade = 10);

/// Values (1/m) ||sigma_m mu(x)||.
LimitBracket pi_estimate(const StepFn& x, const NormSpec& spec, const std::vector<unsigned long>& ms);
LimitBracket pi_estimate(const RSeq& x, const NormSpec& spec, const std::vector<unsigned long>& ms);
/// Generator version; Marcinkiewicz and sup norms only (sup over a geometric
/// n-grid reaching 1e300 or the support length).
LimitBracket pi_estimate(const SeqGenerator& s, const NormSpec& spec, const std::vector<unsigned long>& ms);

/// Values ||(M_m x)_+|| with (M_m x)_+ sampled `per_cell` times per cell.
LimitBracket p_estimate(const SignedStep& x, const NormSpec& spec, const std::vector<unsigned long>& ms,
                        int per_cell = 64);
LimitBracket p_estimate(const StepFn& a, const StepFn& b, const NormSpec& spec,
                        const std::vector<unsigned long>& ms, int per_cell = 64);

/// xi_n = (1/psi(n)) sum_{k <= n} s_k.
LimitBracket dixmier_bracket(const SeqGenerator& s, const Psi& psi, const std::vector<double>& ns);

struct CriterionResult {
    RatioProfile profile;       ///< dyadic grid 1, 2, 4, ... plus t_hi
    double fitted_limit = 0.0;  ///< L in ratio - 1 ~ L + c/k over the tail
    bool decreasing = false;
    bool positive = false;
    std::string note;
};

/// Sampled test of liminf psi(2t)/psi(t) = 1.
CriterionResult criterion(const Psi& psi, double t_hi, double tol = 0.02);

/// ||(Cx) chi_(0, w]||; exact-log integrals for L1, endpoint maxima for sup,
/// sampled otherwise.
double hardy_norm(const SignedStep& x, const NormSpec& spec, const Rational& window, int per_cell = 64);

struct FkResult {
    std::vector<std::pair<double, double>> series;  ///< (window, norm)
    std::string verdict;  ///< "likely in Z_E" | "diverges" | "inconclusive"
    Rational total;       ///< integral of x over the semi-axis
};

FkResult fk_diagnostic(const SignedStep& x, const NormSpec& spec, const std::vector<Rational>& windows);
/// x = mu(a) - mu(b).
FkResult fk_diagnostic(const StepFn& a, const StepFn& b, const NormSpec& spec, const std::vector<Rational>& windows);

}  // namespace symfun
