#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "symfun/io.hpp"

using namespace symfun;

namespace {

namespace fs = std::filesystem;

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path workdir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "symfun_cli_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write(const std::string& name, const std::string& text) {
    fs::path p = workdir() / name;
    std::ofstream(p) << text;
    return p;
}

Run run(const std::string& args) {
    fs::path out = workdir() / "stdout.txt", err = workdir() / "stderr.txt";
    std::string cmd = std::string(SYMFUN_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string last_line(const std::string& text) {
    std::istringstream in(text);
    std::string line, last;
    while (std::getline(in, line))
        if (!line.empty()) last = line;
    return last;
}

}  // namespace

TEST_CASE("dixmier CSV ends near the harmonic mean") {
    Run r = run("dixmier --s harmonic --psi log1p --n 1e2:1e5 --format csv");
    REQUIRE(r.code == 0);
    std::string last = last_line(r.out);
    double value = std::stod(last.substr(last.find(',') + 1));
    CHECK(value == doctest::Approx(1.0501).epsilon(5e-4));
    CHECK(r.out.rfind("n,value\n", 0) == 0);
}

TEST_CASE("check reports submajorization") {
    auto y = write("y.json", R"({"values": ["2", "1"]})");
    auto x = write("x.json", R"({"values": ["3", "0"]})");
    Run r = run("check --relation submajor --y " + y.string() + " --x " + x.string());
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j["verdict"] == true);
    CHECK(j["margin"] == "0");
    Run u = run("check --relation uniform --y " + x.string() + " --x " + y.string() + " --mmax 8");
    REQUIRE(u.code == 0);
    CHECK(json::parse(u.out)["verdict"] == false);
}

TEST_CASE("verify exits cleanly") {
    fs::path report = workdir() / "report.json";
    Run r = run("verify --seed 1 --trials 50 --out " + report.string());
    CHECK(r.code == 0);
    json j = json::parse(slurp(report));
    CHECK(j["total_violations"] == 0);
    CHECK(j["trials"] == 50);
}

TEST_CASE("input errors exit 1 with one line") {
    auto bad = write("bad.json", "{ nope");
    for (const std::string& args : {"norm --input " + bad.string(), std::string("norm --input /nonexistent.json"),
                                    std::string("frobnicate"), std::string("norm --norm marc:bogus --input ") +
                                                                   write("ok.json", R"([1])").string(),
                                    std::string("dixmier --n 5"), std::string("verify --max-length 100")}) {
        Run r = run(args);
        INFO(args);
        CHECK(r.code == 1);
        CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    }
}

TEST_CASE("emitted JSON is accepted back") {
    auto x = write("x2.json", R"({"breakpoints": ["1", "3", "4"], "values": ["1", "5/2", "0"]})");
    fs::path rearranged = workdir() / "rearranged.json";
    REQUIRE(run("rearrange --input " + x.string() + " --out " + rearranged.string()).code == 0);
    Run n = run("norm --norm l1 --input " + rearranged.string());
    REQUIRE(n.code == 0);
    CHECK(json::parse(n.out)["exact"] == "6");

    fs::path part = workdir() / "part.json";
    REQUIRE(run("partitions --input " + rearranged.string() + " --kappa 2,2,inf --n-min -1 --out " + part.string())
                .code == 0);
    json pj = json::parse(slurp(part));
    auto e = write("e.json", pj["expectation"].dump());
    CHECK(run("norm --norm sup --input " + e.string()).code == 0);

    auto m = write("m.json", "[[3, 0], [0, -4]]");
    fs::path sv = workdir() / "sv.json";
    REQUIRE(run("svd --input " + m.string() + " --out " + sv.string()).code == 0);
    CHECK(json::parse(slurp(sv))["values"] == json::parse("[4.0, 3.0]"));
    Run pi = run("pi --input " + sv.string() + " --schedule 2:3");
    REQUIRE(pi.code == 0);
    CHECK(json::parse(pi.out)["series"].size() == 3);

    fs::path csv = workdir() / "r.csv";
    REQUIRE(run("rearrange --format csv --input " + x.string() + " --out " + csv.string()).code == 0);
    CHECK(run("norm --norm l1 --input " + csv.string()).code == 0);
}

TEST_CASE("trace subcommands") {
    Run c = run("criterion --psi pow:0.5");
    REQUIRE(c.code == 0);
    CHECK(json::parse(c.out)["positive"] == false);
    auto a = write("a.json", R"({"breakpoints": ["1"], "values": ["1"]})");
    auto b = write("b.json", R"({"breakpoints": ["2"], "values": ["1/2"]})");
    Run fk = run("fk --a " + a.string() + " --b " + b.string() + " --norm l1 --windows 2:12");
    REQUIRE(fk.code == 0);
    CHECK(json::parse(fk.out)["verdict"] == "likely in Z_E");
    Run p = run("p --a " + a.string() + " --b " + b.string() + " --norm marc:log1p --schedule 2:4 --format csv");
    REQUIRE(p.code == 0);
    CHECK(p.out.rfind("m,value\n", 0) == 0);
}
