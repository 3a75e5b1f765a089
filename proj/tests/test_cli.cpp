#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <hfrac/cli/commands.hpp>

using namespace hfrac::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hfrac_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int call(std::vector<std::string> args, std::string* err_out = nullptr) {
    args.insert(args.begin(), "hfrac");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream err;
    const int rc = run(static_cast<int>(argv.size()), argv.data(), err);
    if (err_out) *err_out = err.str();
    return rc;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

} // namespace

TEST_CASE("RFC-4180 quoting", "[cli]") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("config errors exit with status 2 and one line", "[cli]") {
    const auto dir = scratch("errors");
    write_file(dir / "bad.json", R"({"no_such_key": 1})");
    std::string err;
    CHECK(call({"eval", "--config", (dir / "bad.json").string(), "--out", dir.string()}, &err) == 2);
    CHECK(err.find("code=config") != std::string::npos);
    CHECK(std::count(err.begin(), err.end(), '\n') == 1);
    write_file(dir / "range.json", R"({"s": 1.2})");
    CHECK(call({"eval", "--config", (dir / "range.json").string()}, &err) == 2);
    write_file(dir / "type.json", R"({"s": "half"})");
    CHECK(call({"eval", "--config", (dir / "type.json").string()}, &err) == 2);
    CHECK(call({"eval", "--config", (dir / "missing.json").string()}, &err) == 2);
    CHECK(call({"frobnicate"}, &err) == 2);
    CHECK(call({"eval", "--seed", "-3"}, &err) == 2);
}

TEST_CASE("geometry violations exit with status 4", "[cli]") {
    const auto dir = scratch("geometry");
    write_file(dir / "g.json", R"({"harnack.r": 0.5, "harnack.checks": ["harnack"]})");
    std::string err;
    CHECK(call({"harnack", "--config", (dir / "g.json").string(), "--out", dir.string()}, &err) == 4);
    CHECK(err.find("code=geometry") != std::string::npos);
}

TEST_CASE("non-convergence exits with status 3", "[cli]") {
    const auto dir = scratch("convergence");
    write_file(dir / "c.json", R"({"solver.max_iter": 1, "mesh.h": 0.3})");
    std::string err;
    CHECK(call({"solve", "--config", (dir / "c.json").string(), "--out", dir.string()}, &err) == 3);
    CHECK(fs::exists(dir / "summary.csv"));
}

TEST_CASE("environment overrides and hashing", "[cli]") {
    const auto dir = scratch("env");
    write_file(dir / "c.json", R"({"u.kind": "constant", "u.value": 1.0, "quad.angular_samples": 256})");
    REQUIRE(call({"eval", "--config", (dir / "c.json").string(), "--out", (dir / "a").string()}) == 0);
    setenv("HFRAC_S", "0.25", 1);
    const int rc = call({"eval", "--config", (dir / "c.json").string(), "--out", (dir / "b").string()});
    unsetenv("HFRAC_S");
    REQUIRE(rc == 0);
    const auto a = slurp(dir / "a" / "eval.csv"), b = slurp(dir / "b" / "eval.csv");
    CHECK(a.rfind("# config_hash=", 0) == 0);
    CHECK(a.substr(0, 30) != b.substr(0, 30));
    CHECK(b.find(",0.25,") != std::string::npos);
    // constant input: value column is zero
    CHECK(b.find(",0.25,2,0,0,0,") != std::string::npos);
    setenv("HFRAC_BOGUS", "1", 1);   // not a config key: ignored, only known keys are looked up
    CHECK(call({"eval", "--config", (dir / "c.json").string(), "--out", (dir / "c").string()}) == 0);
    unsetenv("HFRAC_BOGUS");
    CHECK(slurp(dir / "c" / "eval.csv") == a);
}

TEST_CASE("solve writes the constant solution for constant data", "[cli]") {
    const auto dir = scratch("solve");
    write_file(dir / "c.json", R"({"g.kind": "constant", "g.value": 2.0, "mesh.h": 0.35})");
    REQUIRE(call({"solve", "--config", (dir / "c.json").string(), "--out", dir.string()}) == 0);
    std::ifstream in(dir / "solution.csv");
    std::string line;
    for (int k = 0; k < 3; ++k) std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        CHECK(line.substr(line.rfind(',') + 1) == "2");
        ++rows;
    }
    CHECK(rows > 0);
}
