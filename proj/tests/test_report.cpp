#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "scenerywalk/cli.hpp"
#include "scenerywalk/io/report.hpp"

using namespace scenerywalk;

namespace {

int invoke(std::initializer_list<const char*> args, std::string& out_text) {
    std::vector<const char*> argv{"scenerywalk"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    out_text = out.str();
    return code;
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("scenerywalk_test_" + name);
    std::filesystem::remove(p);
    return p;
}

}  // namespace

TEST_CASE("number formatting round-trips", "[report]") {
    CHECK(io::format_number(0.5) == "0.5");
    CHECK(io::format_number(2.0) == "2");
    CHECK(io::format_number(std::nan("")) == "NA");
    CHECK(io::format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    for (double v : {0.1, 1.0 / 3.0, 6.02e23, -1e-300}) CHECK(std::stod(io::format_number(v)) == v);
}

TEST_CASE("csv tables quote cells and carry provenance", "[report]") {
    io::CsvTable t({"a", "b"});
    t.add_row({"1", "x,y"});
    t.add_row({"say \"hi\"", "2"});
    t.add_footer("slope=1");
    CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);
    const io::Provenance p{7, 10, "simulate:lln"};
    const auto s = t.str(&p);
    std::istringstream in(s);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# scenerywalk-", 0) == 0);
    CHECK(line.find("seed=7 replicas=10") != std::string::npos);
    std::getline(in, line);
    CHECK(line == "a,b");
    std::getline(in, line);
    CHECK(line == "1,\"x,y\"");
    std::getline(in, line);
    CHECK(line == "\"say \"\"hi\"\"\",2");
    std::getline(in, line);
    CHECK(line == "# slope=1");
    CHECK(t.to_json()[0]["b"] == "x,y");
}

TEST_CASE("outputs are written once", "[report]") {
    const auto path = scratch("once.txt");
    io::write_once(path.string(), "first", std::cout);
    CHECK_THROWS_AS(io::write_once(path.string(), "second", std::cout), io::OutputExistsError);
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "first");
    std::filesystem::remove(path);
    std::ostringstream os;
    io::write_once("-", "to stdout", os);
    CHECK(os.str() == "to stdout");
}

TEST_CASE("json numbers and dumps", "[report]") {
    CHECK(io::number(std::nan("")).is_null());
    CHECK(io::number(1.5) == 1.5);
    nlohmann::json j{{"b", 1}, {"a", 2}};
    CHECK(io::dump(j) == "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
}

TEST_CASE("grid and number parsing", "[cli]") {
    CHECK(cli::parse_number("1.5") == 1.5);
    CHECK(cli::parse_number(" 2 ") == 2.0);
    CHECK_THROWS_AS(cli::parse_number("1.5x"), cli::UsageError);
    CHECK_THROWS_AS(cli::parse_number(""), cli::UsageError);
    CHECK(cli::parse_grid("3", false) == std::vector<double>{3.0});
    CHECK(cli::parse_grid("1,2,4", false) == std::vector<double>{1.0, 2.0, 4.0});
    CHECK(cli::parse_grid("0:1:3", false) == std::vector<double>{0.0, 0.5, 1.0});
    const auto g = cli::parse_grid("1:100:3", true);
    REQUIRE(g.size() == 3);
    CHECK(g[1] == Catch::Approx(10.0));
    CHECK(cli::parse_grid("1:2:0", false).empty());
    CHECK(cli::parse_grid("", false).empty());
    CHECK_THROWS_AS(cli::parse_grid("1:2", false), cli::UsageError);
    CHECK_THROWS_AS(cli::parse_grid("1:2:1.5", false), cli::UsageError);
    CHECK_THROWS_AS(cli::parse_grid("0:2:3", true), cli::UsageError);
}

TEST_CASE("command line exit codes", "[cli]") {
    std::string out;
    CHECK(invoke({"exponents", "--which", "p", "--alpha", "1", "--rho", "1.5"}, out) == cli::kOk);
    CHECK(out.find("1,1.5,0.5,first") != std::string::npos);
    CHECK(invoke({"exponents", "--which", "p", "--alpha", "1", "--rho", "1:2:0"}, out) == cli::kUsage);
    CHECK(invoke({"exponents", "--bogus"}, out) == cli::kUsage);
    CHECK(invoke({}, out) == cli::kUsage);
    CHECK(invoke({"simulate", "--task", "lln", "--alpha", "1", "--t-grid", "100", "--replicas", "10"}, out) ==
          cli::kUsage);
    CHECK(invoke({"simulate", "--task", "tail-rwrs", "--alpha", "1", "--rho", "1.5", "--t-grid", "100",
                  "--replicas", "10"},
                 out) == cli::kRefused);
    CHECK(invoke({"verify", "--suite", "variational", "--scale", "quick"}, out) == cli::kOk);
    CHECK(invoke({"verify", "--suite", "nonexistent"}, out) == cli::kUsage);
    CHECK(invoke({"--version"}, out) == cli::kOk);
    CHECK(out.rfind("scenerywalk-", 0) == 0);
}

TEST_CASE("command line refuses to overwrite outputs", "[cli]") {
    const auto path = scratch("cli_out.csv");
    std::string out;
    const std::string p = path.string();
    CHECK(invoke({"exponents", "--which", "q", "--alpha", "1", "--delta", "0.8", "--out", p.c_str()}, out) ==
          cli::kOk);
    const auto size = std::filesystem::file_size(path);
    CHECK(invoke({"exponents", "--which", "q", "--alpha", "2", "--delta", "0.8", "--out", p.c_str()}, out) ==
          cli::kUsage);
    CHECK(std::filesystem::file_size(path) == size);
    std::filesystem::remove(path);
}
