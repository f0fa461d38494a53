// symfun: command-line front end.
//
// Exit codes: 0 success, 1 bad input (one line on stderr), 2 verify found violations.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "symfun/averaging.hpp"
#include "symfun/error.hpp"
#include "symfun/io.hpp"
#include "symfun/linalg.hpp"
#include "symfun/majorization.hpp"
#include "symfun/norms.hpp"
#include "symfun/traces.hpp"
#include "symfun/verify.hpp"

using namespace symfun;

namespace {

struct Output {
    std::string format = "json";
    std::string path;

    void emit(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        require(static_cast<bool>(out), "invalid-input", "cannot write '" + path + "'");
        out << text;
    }
    void emit(const json& j) const { emit(j.dump(2) + "\n"); }
    bool csv() const { return format == "csv"; }
};

std::string series_csv(const char* index, const std::vector<std::pair<double, double>>& series) {
    std::string out = std::string(index) + ",value\n";
    for (const auto& [i, v] : series) out += format_double(i) + "," + format_double(v) + "\n";
    return out;
}

/// StepFn file, or a plain sequence ({"values": ...} or an array) read on unit cells.
StepFn read_function(const std::string& path) {
    if (std::filesystem::path(path).extension() == ".csv") return read_stepfn(path);
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error&) {
        throw Error("invalid-input", "malformed JSON in '" + path + "'");
    }
    if (j.is_object() && j.contains("breakpoints")) return stepfn_from_json(j);
    return to_stepfn(rseq_from_json(j));
}

std::vector<Rational> window_schedule(const std::string& text) {
    std::vector<Rational> out;
    for (unsigned long m : parse_m_schedule(text)) out.emplace_back(m);
    return out;
}

json fk_json(const FkResult& r) {
    json series = json::array();
    for (const auto& [w, v] : r.series) series.push_back({w, v});
    return json{{"series", series}, {"verdict", r.verdict}, {"total", to_string(r.total)}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symfun: rearrangements, majorization and trace diagnostics"};
    app.require_subcommand(1);
    Output out;
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--format", out.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", out.path, "write here instead of stdout");
    };

    std::string input, norm_text = "marc:log1p";

    auto* rearrange_cmd = app.add_subcommand("rearrange", "decreasing rearrangement of a step function");
    rearrange_cmd->add_option("--input", input)->required();
    add_output(rearrange_cmd);

    auto* norm_cmd = app.add_subcommand("norm", "symmetric norm of a step function");
    norm_cmd->add_option("--input", input)->required();
    norm_cmd->add_option("--norm", norm_text);
    add_output(norm_cmd);

    std::string relation = "submajor", y_path, x_path;
    unsigned m_max = 64;
    auto* check_cmd = app.add_subcommand("check", "y <<= x or y |> x");
    check_cmd->add_option("--relation", relation)->check(CLI::IsMember({"submajor", "uniform"}));
    check_cmd->add_option("--y", y_path)->required();
    check_cmd->add_option("--x", x_path)->required();
    check_cmd->add_option("--mmax", m_max)->check(CLI::Range(1u, 4096u));
    add_output(check_cmd);

    std::string theta_text = "1", kappa_text, beyond_text = "keep";
    int n_min = 0;
    std::optional<unsigned> a_m;
    auto* part_cmd = app.add_subcommand("partitions", "node sets B_kappa / A_m and the averaged function");
    part_cmd->add_option("--input", input)->required();
    part_cmd->add_option("--theta", theta_text);
    part_cmd->add_option("--kappa", kappa_text, "comma list from --n-min, inf allowed");
    part_cmd->add_option("--m", a_m, "build A_m instead of B_kappa");
    part_cmd->add_option("--n-min", n_min);
    part_cmd->add_option("--beyond", beyond_text, "past the last node: keep x or drop to 0")
        ->check(CLI::IsMember({"keep", "drop"}));
    add_output(part_cmd);

    std::string schedule = "2:14";
    auto* pi_cmd = app.add_subcommand("pi", "(1/m) ||sigma_m mu(x)|| along m = b^1..b^e");
    pi_cmd->add_option("--input", input)->required();
    pi_cmd->add_option("--norm", norm_text);
    pi_cmd->add_option("--schedule", schedule, "b:e");
    add_output(pi_cmd);

    std::string a_path, b_path;
    int per_cell = 64;
    auto* p_cmd = app.add_subcommand("p", "||(M_m x)_+|| along m = b^1..b^e");
    p_cmd->add_option("--input", input, "signed step function");
    p_cmd->add_option("--a", a_path);
    p_cmd->add_option("--b", b_path);
    p_cmd->add_option("--norm", norm_text);
    p_cmd->add_option("--schedule", schedule, "b:e");
    p_cmd->add_option("--per-cell", per_cell)->check(CLI::Range(1, 4096));
    add_output(p_cmd);

    std::string seq_text = "harmonic", psi_text = "log1p", n_text = "1e2:1e6";
    auto* dix_cmd = app.add_subcommand("dixmier", "xi_n = sum_{k<=n} s_k / psi(n)");
    dix_cmd->add_option("--s", seq_text);
    dix_cmd->add_option("--psi", psi_text);
    dix_cmd->add_option("--n", n_text, "lo:hi");
    add_output(dix_cmd);

    double t_hi = 1e12;
    auto* crit_cmd = app.add_subcommand("criterion", "is liminf psi(2t)/psi(t) = 1?");
    crit_cmd->add_option("--psi", psi_text);
    crit_cmd->add_option("--t-hi", t_hi);
    add_output(crit_cmd);

    std::string windows = "2:20";
    auto* fk_cmd = app.add_subcommand("fk", "||(Cx) chi_(0,w]|| for growing windows");
    fk_cmd->add_option("--input", input, "signed step function");
    fk_cmd->add_option("--a", a_path);
    fk_cmd->add_option("--b", b_path);
    fk_cmd->add_option("--norm", norm_text);
    fk_cmd->add_option("--windows", windows, "b:e, windows b^1..b^e");
    add_output(fk_cmd);

    unsigned direct = 1;
    auto* svd_cmd = app.add_subcommand("svd", "singular values of a square matrix");
    svd_cmd->add_option("--input", input)->required();
    svd_cmd->add_option("--direct-sum", direct, "m-fold block diagonal first")->check(CLI::Range(1u, 128u));
    add_output(svd_cmd);

    SuiteConfig cfg;
    std::string replay_text;
    auto* verify_cmd = app.add_subcommand("verify", "randomized property suite");
    verify_cmd->add_option("--seed", cfg.seed);
    verify_cmd->add_option("--trials", cfg.trials);
    verify_cmd->add_option("--max-length", cfg.max_length);
    verify_cmd->add_option("--max-matrix", cfg.max_matrix);
    verify_cmd->add_option("--kappa-window", cfg.kappa_window);
    verify_cmd->add_option("--min-hits", cfg.min_hits);
    verify_cmd->add_option("--only", cfg.only, "property names");
    verify_cmd->add_option("--replay", replay_text, "property:trial");
    verify_cmd->add_flag("--list", "print the property catalog");
    verify_cmd->add_option("--out", out.path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "symfun: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*rearrange_cmd) {
            StepFn r = rearrange(read_function(input));
            out.csv() ? out.emit(to_csv(r)) : out.emit(to_json(r));
        } else if (*norm_cmd) {
            NormSpec spec = NormSpec::parse(norm_text);
            NormValue v = norm(read_function(input), spec);
            if (out.csv()) {
                out.emit("norm,value,budget\n" + spec.to_string() + "," + format_double(v.value) + "," + v.budget() + "\n");
            } else {
                json j{{"norm", spec.to_string()}, {"value", v.value}, {"budget", v.budget()}};
                if (v.exact) j["exact"] = to_string(*v.exact);
                out.emit(j);
            }
        } else if (*check_cmd) {
            require(!out.csv(), "invalid-input", "check reports are JSON only");
            StepFn y = read_function(y_path), x = read_function(x_path);
            if (relation == "submajor") {
                out.emit(to_json(submajorize(y, x)));
            } else {
                UniformReport u = uniform_submajorize(y, x, m_max);
                json j = to_json(u.report);
                j["witness"] = u.witness ? json(*u.witness) : json(nullptr);
                j["verdict"] = u.witness.has_value();
                out.emit(j);
            }
        } else if (*part_cmd) {
            StepFn x = read_function(input);
            Beyond beyond = beyond_text == "drop" ? Beyond::Drop : Beyond::Keep;
            json j;
            NodeSet nodes;
            if (a_m) {
                require(*a_m >= 2, "invalid-input", "--m must be at least 2");
                nodes = build_A_m(x, *a_m, n_min);
                j["m"] = *a_m;
            } else {
                require(!kappa_text.empty(), "invalid-input", "partitions needs --kappa or --m");
                Rational theta = parse_rational(theta_text);
                KappaSeq kappa = KappaSeq::parse(kappa_text, n_min);
                nodes = build_B(x, kappa, theta);
                json an = json::object();
                for (const auto& [n, t] : a_nodes(x, theta, std::min(n_min * 3, n_min)).nodes)
                    an[std::to_string(n)] = to_string(t);
                j["theta"] = to_string(theta);
                j["kappa"] = kappa.to_string();
                j["a_nodes"] = an;
            }
            json node_list = json::array();
            for (const auto& t : nodes.partition.nodes()) node_list.push_back(to_string(t));
            StepFn e = expectation(x, nodes.partition, beyond);
            if (out.csv()) {
                out.emit(to_csv(e));
            } else {
                j["nodes"] = node_list;
                j["indices"] = nodes.indices;
                j["window_truncated"] = nodes.window_truncated;
                j["beyond"] = beyond_text;
                j["expectation"] = to_json(e);
                out.emit(j);
            }
        } else if (*pi_cmd) {
            LimitBracket b = pi_estimate(read_function(input), NormSpec::parse(norm_text), parse_m_schedule(schedule));
            out.csv() ? out.emit(series_csv("m", b.series)) : out.emit(to_json(b));
        } else if (*p_cmd) {
            NormSpec spec = NormSpec::parse(norm_text);
            auto ms = parse_m_schedule(schedule);
            LimitBracket b;
            if (!input.empty()) {
                b = p_estimate(read_signed(input), spec, ms, per_cell);
            } else {
                require(!a_path.empty() && !b_path.empty(), "invalid-input", "p needs --input or both --a and --b");
                b = p_estimate(read_function(a_path), read_function(b_path), spec, ms, per_cell);
            }
            out.csv() ? out.emit(series_csv("m", b.series)) : out.emit(to_json(b));
        } else if (*dix_cmd) {
            LimitBracket b = dixmier_bracket(SeqGenerator::parse(seq_text), Psi::parse(psi_text), parse_n_schedule(n_text));
            out.csv() ? out.emit(series_csv("n", b.series)) : out.emit(to_json(b));
        } else if (*crit_cmd) {
            Psi psi = Psi::parse(psi_text);
            CriterionResult r = criterion(psi, t_hi);
            if (out.csv()) {
                out.emit(series_csv("t", r.profile.points));
            } else {
                json profile = json::array();
                for (const auto& [t, v] : r.profile.points) profile.push_back({t, v});
                out.emit(json{{"psi", psi.name()},
                              {"positive", r.positive},
                              {"decreasing", r.decreasing},
                              {"fitted_limit", r.fitted_limit},
                              {"min_ratio", r.profile.min},
                              {"note", r.note},
                              {"profile", profile}});
            }
        } else if (*fk_cmd) {
            NormSpec spec = NormSpec::parse(norm_text);
            auto ws = window_schedule(windows);
            FkResult r;
            if (!input.empty()) {
                r = fk_diagnostic(read_signed(input), spec, ws);
            } else {
                require(!a_path.empty() && !b_path.empty(), "invalid-input", "fk needs --input or both --a and --b");
                r = fk_diagnostic(read_function(a_path), read_function(b_path), spec, ws);
            }
            out.csv() ? out.emit(series_csv("window", r.series)) : out.emit(fk_json(r));
        } else if (*svd_cmd) {
            Matrix a = read_matrix(input);
            if (direct > 1) a = op_direct_sum(a, direct);
            auto s = singular_values(a);
            if (out.csv()) {
                std::string text = "k,value\n";
                for (std::size_t k = 0; k < s.size(); ++k) text += std::to_string(k + 1) + "," + format_double(s[k]) + "\n";
                out.emit(text);
            } else {
                out.emit(json{{"values", s}});
            }
        } else if (*verify_cmd) {
            if (verify_cmd->count("--list") > 0) {
                json list = json::array();
                for (const auto& p : property_catalog())
                    list.push_back({{"name", p.name},
                                    {"kind", p.kind == PropertyKind::Exact ? "exact" : "float"},
                                    {"conditional", p.conditional},
                                    {"statement", p.statement}});
                out.emit(list);
                return 0;
            }
            cfg.validate();
            if (!replay_text.empty()) {
                auto colon = replay_text.rfind(':');
                require(colon != std::string::npos, "invalid-input", "--replay expects property:trial");
                unsigned trial = static_cast<unsigned>(std::stoul(replay_text.substr(colon + 1)));
                TrialOutcome o = replay(replay_text.substr(0, colon), cfg.seed, trial, cfg);
                out.emit(json{{"hit", o.hit},
                              {"ok", o.ok},
                              {"margin", std::isfinite(o.margin) ? json(o.margin) : json(nullptr)},
                              {"detail", o.detail}});
                return o.ok ? 0 : 2;
            }
            SuiteReport report = run_suite(cfg);
            out.emit(to_json(report));
            unsigned bad = report.total_violations();
            for (const auto& p : report.properties)
                if (p.violations > 0 || p.under_sampled)
                    std::cerr << p.info.name << ": " << p.violations << " violation(s), " << p.hits << "/" << p.trials
                              << " hits" << (p.under_sampled ? " (under-sampled)" : "") << "\n";
            return bad == 0 ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& c : msg)
            if (c == '\n') c = ' ';
        std::cerr << "symfun: " << msg << "\n";
        return 1;
    }
    return 0;
}
