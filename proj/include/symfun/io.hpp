#pragma once

// JSON and CSV encodings. Rationals travel as "p/q" strings; plain JSON
// numbers are accepted on input and read as the exact decimal they spell.

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "symfun/core.hpp"
#include "symfun/linalg.hpp"
#include "symfun/majorization.hpp"
#include "symfun/traces.hpp"

namespace symfun {

using json = nlohmann::json;

/// Shortest round-trip decimal.
std::string format_double(double v);

Rational rational_from_json(const json& j);

json to_json(const StepFn& x);
json to_json(const SignedStep& x);
/// Unit-cell breakpoints 1..n, so the output also reads back as a StepFn.
json to_json(const RSeq& x);
json to_json(const Matrix& a);
json to_json(const LimitBracket& b);
json to_json(const MajorizationReport& r);

/// {"breakpoints": [...], "values": [...], "tail": bool?}.
StepFn stepfn_from_json(const json& j);
SignedStep signed_from_json(const json& j);
/// Either {"values": [...]} or a StepFn object with unit cells.
RSeq rseq_from_json(const json& j);
/// Nested arrays, or {"rows": [[...], ...]}.
Matrix matrix_from_json(const json& j);

/// Lines "t,value" (optional header); value holds on the cell ending at t.
std::string to_csv(const StepFn& x);
SignedStep signed_from_csv(std::string_view text);
Matrix matrix_from_csv(std::string_view text);

std::string read_text(const std::filesystem::path& path);
/// Dispatches on the ".csv" extension, JSON otherwise.
StepFn read_stepfn(const std::filesystem::path& path);
SignedStep read_signed(const std::filesystem::path& path);
Matrix read_matrix(const std::filesystem::path& path);

}  // namespace symfun
