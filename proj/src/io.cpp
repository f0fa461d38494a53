#include "symfun/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "symfun/error.hpp"

namespace symfun {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

Rational rational_from_json(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return parse_rational(j.dump());
    if (j.is_number_float()) {
        double v = j.get<double>();
        require(std::isfinite(v), "invalid-input", "non-finite number");
        return parse_rational(format_double(v));
    }
    throw Error("invalid-input", "expected a rational, got " + j.dump());
}

namespace {

json rational_array(const std::vector<Rational>& v) {
    json out = json::array();
    for (const auto& q : v) out.push_back(to_string(q));
    return out;
}

std::vector<Rational> rationals_of(const json& j, const char* field) {
    require(j.is_object() && j.contains(field) && j[field].is_array(), "invalid-input",
            std::string("missing array field '") + field + "'");
    std::vector<Rational> out;
    for (const auto& item : j[field]) out.push_back(rational_from_json(item));
    return out;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    return out;
}

bool is_header(const std::vector<std::string>& fields) {
    try {
        for (const auto& f : fields) parse_rational(f);
        return false;
    } catch (const Error&) {
        return true;
    }
}

}  // namespace

json to_json(const StepFn& x) {
    json out = to_json(x.as_signed());
    if (x.tail()) out["tail"] = true;
    return out;
}

json to_json(const SignedStep& x) {
    return json{{"breakpoints", rational_array(x.breakpoints())}, {"values", rational_array(x.values())}};
}

json to_json(const RSeq& x) {
    std::vector<Rational> breaks;
    for (std::size_t k = 1; k <= x.size(); ++k) breaks.emplace_back(static_cast<unsigned long>(k));
    return json{{"breakpoints", rational_array(breaks)}, {"values", rational_array(x.values())}};
}

json to_json(const Matrix& a) { return json{{"rows", a.rows()}}; }

json to_json(const LimitBracket& b) {
    json series = json::array();
    for (const auto& [i, v] : b.series) series.push_back({i, v});
    return json{{"series", series},
                {"liminf_est", b.liminf_est},
                {"limsup_est", b.limsup_est},
                {"cesaro", b.cesaro},
                {"converged", b.converged}};
}

json to_json(const MajorizationReport& r) {
    json out{{"verdict", r.verdict}, {"margin", to_string(r.margin)}};
    if (r.first_violation)
        out["first_violation"] = {{"a", to_string(r.first_violation->a)}, {"b", to_string(r.first_violation->b)}};
    return out;
}

SignedStep signed_from_json(const json& j) {
    return SignedStep(rationals_of(j, "breakpoints"), rationals_of(j, "values"));
}

StepFn stepfn_from_json(const json& j) {
    bool tail = j.is_object() && j.contains("tail") && j["tail"].is_boolean() && j["tail"].get<bool>();
    return StepFn::from_signed(signed_from_json(j), tail);
}

RSeq rseq_from_json(const json& j) {
    if (j.is_array()) {
        std::vector<Rational> values;
        for (const auto& item : j) values.push_back(rational_from_json(item));
        return RSeq(std::move(values));
    }
    if (j.is_object() && !j.contains("breakpoints")) return RSeq(rationals_of(j, "values"));
    return to_rseq(stepfn_from_json(j));
}

Matrix matrix_from_json(const json& j) {
    const json& rows = j.is_object() && j.contains("rows") ? j["rows"] : j;
    require(rows.is_array(), "invalid-input", "matrix must be a nested array");
    std::vector<std::vector<double>> data;
    for (const auto& row : rows) {
        require(row.is_array(), "invalid-input", "matrix rows must be arrays");
        std::vector<double> r;
        for (const auto& v : row) {
            require(v.is_number(), "invalid-input", "matrix entries must be numbers");
            r.push_back(v.get<double>());
        }
        data.push_back(std::move(r));
    }
    return Matrix::from_rows(data);
}

std::string to_csv(const StepFn& x) {
    std::string out = "t,value\n";
    for (std::size_t i = 0; i < x.cell_count(); ++i)
        out += to_string(x.breakpoints()[i]) + "," + to_string(x.values()[i]) + "\n";
    return out;
}

SignedStep signed_from_csv(std::string_view text) {
    std::vector<Rational> breaks, values;
    auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto fields = split_fields(lines[i]);
        if (i == 0 && is_header(fields)) continue;
        require(fields.size() == 2, "invalid-input", "CSV rows must be 't,value'");
        breaks.push_back(parse_rational(fields[0]));
        values.push_back(parse_rational(fields[1]));
    }
    return SignedStep(std::move(breaks), std::move(values));
}

Matrix matrix_from_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    for (const auto& line : split_lines(text)) {
        std::vector<double> row;
        for (const auto& f : split_fields(line)) row.push_back(to_double(parse_rational(f)));
        rows.push_back(std::move(row));
    }
    return Matrix::from_rows(rows);
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), "invalid-input", "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

json parse_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw Error("invalid-input", "malformed JSON in '" + path.string() + "'");
    }
}

}  // namespace

StepFn read_stepfn(const std::filesystem::path& path) {
    if (path.extension() == ".csv") return StepFn::from_signed(signed_from_csv(read_text(path)));
    return stepfn_from_json(parse_json_file(path));
}

SignedStep read_signed(const std::filesystem::path& path) {
    if (path.extension() == ".csv") return signed_from_csv(read_text(path));
    return signed_from_json(parse_json_file(path));
}

Matrix read_matrix(const std::filesystem::path& path) {
    if (path.extension() == ".csv") return matrix_from_csv(read_text(path));
    return matrix_from_json(parse_json_file(path));
}

}  // namespace symfun
