#pragma once

// Randomized property battery: every inequality the library relies on,
// replayable trial by trial from a seed.

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "symfun/core.hpp"
#include "symfun/io.hpp"

namespace symfun {

struct Tolerances {
    double float_abs = 1e-9;   ///< log-mean inequalities, inputs normalized to sup norm 1
    double norm_rel = 1e-10;   ///< triangle / monotonicity of float-backed norms
    double matrix_abs = 1e-8;  ///< partial sums of singular values
    double unitary = 1e-9;     ///< relative to the largest singular value
    double svd_rel = 1e-10;    ///< against the Gram oracle, relative to the largest singular value
    double coherence_rel = 1e-9;
};

struct SuiteConfig {
    std::uint64_t seed = 1;
    unsigned trials = 100;
    std::size_t max_length = 64;  ///< cells / sequence entries, <= 64
    std::size_t max_matrix = 16;  ///< <= 16
    int kappa_window = 8;         ///< <= 8
    unsigned min_hits = 30;
    Tolerances tol;
    /// Restrict to these property names; empty runs everything.
    std::vector<std::string> only;

    /// Throws Error("invalid-input") when a cap is out of range.
    void validate() const;
};

enum class PropertyKind { Exact, Float };

struct PropertyInfo {
    std::string name;
    PropertyKind kind;
    bool conditional;
    std::string statement;
};

const std::vector<PropertyInfo>& property_catalog();

struct ViolationRecord {
    std::string property;
    std::uint64_t seed = 0;
    unsigned trial = 0;
    double margin = 0.0;
    std::string detail;
};

struct PropertyReport {
    PropertyInfo info;
    unsigned trials = 0;
    unsigned hits = 0;  ///< trials whose hypothesis held (all trials for unconditional checks)
    unsigned violations = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    bool under_sampled = false;
    std::vector<ViolationRecord> failures;  ///< first few, for replay
};

struct SuiteReport {
    SuiteConfig config;
    std::vector<PropertyReport> properties;
    double seconds = 0.0;

    unsigned total_violations() const;
    const PropertyReport* find(std::string_view name) const;
};

/// Trials run in parallel (capped by SYMFUN_THREADS); the merge is ordered by
/// trial index so the report is independent of scheduling.
SuiteReport run_suite(const SuiteConfig& cfg);

struct TrialOutcome {
    bool hit = true;
    bool ok = true;
    double margin = std::numeric_limits<double>::infinity();
    std::string detail;
};

/// Re-runs one trial; identical to the suite's run of the same (property, seed, trial).
TrialOutcome replay(std::string_view property, std::uint64_t seed, unsigned trial, const SuiteConfig& cfg = {});

json to_json(const SuiteReport& report);

// --- generators ----------------------------------------------------------------

enum class Profile {
    Generic,     ///< arbitrary nonnegative cells
    SlowGrowth,  ///< X(2t) <= 1.2 X(t) at every breakpoint t
    HeavyHead,   ///< at least 90% of the mass in the first cell
    FlatTail,    ///< one long low cell at the end
};

Profile parse_profile(std::string_view text);
std::string to_string(Profile p);

using Rng = std::mt19937_64;

/// Deterministic in (seed, profile). Every profile but Generic is
/// nonincreasing; Generic is sorted only when asked.
StepFn gen_stepfn(std::uint64_t seed, Profile profile, std::size_t max_cells = 16, bool nonincreasing = false);
StepFn gen_stepfn(Rng& rng, Profile profile, std::size_t max_cells, bool nonincreasing = false);

}  // namespace symfun
