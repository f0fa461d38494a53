#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "symfun/error.hpp"
#include "symfun/io.hpp"

using namespace symfun;
using namespace testing_support;

namespace {

std::filesystem::path scratch(const std::string& name, const std::string& text) {
    auto path = std::filesystem::temp_directory_path() / ("symfun_io_" + name);
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_CASE("step functions round-trip through JSON") {
    StepFn x(qs({"1/3", "2", "7/2"}), qs({"5", "1/7", "0"}), true);
    json j = to_json(x);
    CHECK(j["breakpoints"][0] == "1/3");
    CHECK(j["tail"] == true);
    CHECK(stepfn_from_json(j) == x);
    CHECK(stepfn_from_json(json::parse(j.dump())) == x);
}

TEST_CASE("sequences and signed functions round-trip") {
    RSeq s = rseq({"3", "1/2"});
    CHECK(rseq_from_json(to_json(s)) == s);
    CHECK(rseq_from_json(json::parse(R"({"values": ["3", 0.5]})")) == s);
    CHECK(rseq_from_json(json::parse(R"([3, "1/2"])")) == s);
    SignedStep f = sfn({{"1", "-2"}, {"5/2", "1"}});
    CHECK(signed_from_json(to_json(f)) == f);
}

TEST_CASE("JSON numbers are read as the decimal they spell") {
    CHECK(rational_from_json(json(0.1)) == q(1, 10));
    CHECK(rational_from_json(json(3)) == 3);
    CHECK_THROWS_AS(rational_from_json(json(true)), Error);
    CHECK_THROWS_AS(stepfn_from_json(json::parse(R"({"breakpoints": [1]})")), Error);
    CHECK_THROWS_AS(stepfn_from_json(json::parse(R"({"breakpoints": [1], "values": [-1]})")), Error);
}

TEST_CASE("CSV") {
    StepFn x = fn({{"1", "3"}, {"5/2", "1/4"}});
    std::string text = to_csv(x);
    CHECK(text == "t,value\n1,3\n5/2,1/4\n");
    CHECK(StepFn::from_signed(signed_from_csv(text)) == x);
    CHECK(signed_from_csv("1,2\r\n2,1\n\n") == sfn({{"1", "2"}, {"2", "1"}}));
    CHECK_THROWS_AS(signed_from_csv("1,2,3\n"), Error);
    Matrix m = matrix_from_csv("1,2\n3,4\n");
    CHECK(m(1, 0) == 3.0);
}

TEST_CASE("matrices") {
    Matrix a = Matrix::from_rows({{1, 2.5}, {-3, 0}});
    CHECK(matrix_from_json(to_json(a)) == a);
    CHECK(matrix_from_json(json::parse("[[1, 2.5], [-3, 0]]")) == a);
    CHECK_THROWS_AS(matrix_from_json(json::parse(R"([[1, "x"], [0, 0]])")), Error);
}

TEST_CASE("reports and brackets serialize") {
    MajorizationReport r{false, Violation{q("0"), q("1")}, q(-1, 2)};
    json j = to_json(r);
    CHECK(j["verdict"] == false);
    CHECK(j["margin"] == "-1/2");
    CHECK(j["first_violation"]["b"] == "1");
    LimitBracket b = make_bracket({{2, 1.0}, {4, 0.5}});
    json jb = to_json(b);
    CHECK(jb["series"][1][0] == 4.0);
}

TEST_CASE("files") {
    auto good = scratch("good.json", R"({"breakpoints": ["1", "2"], "values": ["2", "1"]})");
    CHECK(read_stepfn(good) == fn({{"1", "2"}, {"2", "1"}}));
    auto csv = scratch("good.csv", "t,value\n1,2\n2,1\n");
    CHECK(read_stepfn(csv) == fn({{"1", "2"}, {"2", "1"}}));
    auto bad = scratch("bad.json", "{ not json");
    CHECK_THROWS_AS(read_stepfn(bad), Error);
    CHECK_THROWS_AS(read_stepfn("/nonexistent/symfun.json"), Error);
    CHECK(format_double(0.1) == "0.1");
}
