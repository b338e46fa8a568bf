#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "caputo/cli/cli.hpp"
#include "caputo/errors.hpp"

using namespace caputo;
using caputo::cli::ExitCode;

namespace {

struct Output {
    int code;
    std::string csv;
    std::string json;
};

Output invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "caputo");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string first_lines(const std::string& text, int n) {
    std::istringstream in(text);
    std::string line;
    std::string result;
    for (int i = 0; i < n && std::getline(in, line); ++i) result += line + "\n";
    return result;
}

}  // namespace

TEST_CASE("grid parsing") {
    const auto g = cli::parse_grid("0.5:2:4");
    CHECK(g.n == 4);
    const auto p = g.points();
    REQUIRE(p.size() == 4);
    CHECK(p.front() == 0.5);
    CHECK(p.back() == 2.0);
    CHECK(p[1] == doctest::Approx(1.0));
    CHECK_THROWS_AS(cli::parse_grid("1:2"), DomainError);
    CHECK_THROWS_AS(cli::parse_grid("2:1:5"), DomainError);
    CHECK_THROWS_AS(cli::parse_grid("0:1:x"), DomainError);
    CHECK(cli::parse_int_list("2,4,8") == std::vector<int>{2, 4, 8});
    CHECK_THROWS_AS(cli::parse_int_list("2,,4"), DomainError);
}

TEST_CASE("derivative command") {
    const auto r = invoke({"derivative", "--s", "0.5", "--profile", "linear", "--grid", "0.5:2:4"});
    CHECK(r.code == ExitCode::ok);
    CHECK(r.csv.rfind("# config-hash: ", 0) == 0);
    CHECK(first_lines(r.csv, 2).find("x,caputo") != std::string::npos);
}

TEST_CASE("extend command") {
    const auto r = invoke({"extend", "--s", "0.5", "--profile", "appendix-es1", "--grid", "1.05:5:20"});
    CHECK(r.code == ExitCode::ok);
    const auto report = nlohmann::json::parse(r.json);
    CHECK(report["residual_max"].get<double>() <= 1e-5);
    CHECK(report["oracle_deviation"].get<double>() <= 1e-6);
    const auto tight = invoke({"extend", "--s", "0.5", "--profile", "appendix-es1", "--grid", "1.05:5:5", "--tol", "1e-300"});
    CHECK(tight.code == ExitCode::target_missed);
}

TEST_CASE("invalid input exits with code 2") {
    CHECK(invoke({"extend", "--s", "1.5", "--profile", "linear"}).code == ExitCode::invalid_input);
    CHECK(invoke({"extend", "--s", "0.5", "--profile", "bogus"}).code == ExitCode::invalid_input);
    CHECK(invoke({"derivative", "--s", "0.5", "--profile", "linear", "--grid", "a:b:c"}).code == ExitCode::invalid_input);
    CHECK(invoke({"frobnicate"}).code == ExitCode::invalid_input);
    CHECK(invoke({}).code == ExitCode::invalid_input);
}

TEST_CASE("runs are deterministic") {
    const std::vector<std::string> args{"extend", "--s", "0.3", "--profile", "poly:0,1,-0.5", "--grid", "1.1:3:7"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    CHECK(a.code == ExitCode::ok);
    CHECK(a.csv == b.csv);
    CHECK(a.json == b.json);
    const auto c = invoke({"extend", "--s", "0.31", "--profile", "poly:0,1,-0.5", "--grid", "1.1:3:7"});
    CHECK(first_lines(a.csv, 1) != first_lines(c.csv, 1));
}

TEST_CASE("config file merges under explicit flags") {
    const std::string path = "caputo_cli_test_config.json";
    {
        std::ofstream f(path);
        f << R"({"s": 0.25, "profile": "linear", "grid": "0.5:1.5:3"})";
    }
    const char* argv1[] = {"caputo", "derivative", "--config", path.c_str()};
    const auto c1 = cli::parse_arguments(4, argv1);
    CHECK(c1.s == 0.25);
    CHECK(c1.profile == "linear");
    REQUIRE(c1.grid);
    CHECK(c1.grid->n == 3);
    const char* argv2[] = {"caputo", "derivative", "--config", path.c_str(), "--s", "0.75"};
    const auto c2 = cli::parse_arguments(6, argv2);
    CHECK(c2.s == 0.75);
    CHECK(c2.profile == "linear");
    CHECK(c1.hash() != c2.hash());
    {
        std::ofstream f(path);
        f << R"({"unknown_key": 1})";
    }
    const char* argv3[] = {"caputo", "derivative", "--config", path.c_str()};
    CHECK_THROWS_AS(cli::parse_arguments(4, argv3), DomainError);
    std::remove(path.c_str());
}

TEST_CASE("blowup and approximate commands") {
    const auto b = invoke({"blowup", "--s", "0.5", "--j-list", "4,8,16"});
    CHECK(b.code == ExitCode::ok);
    const auto rb = nlohmann::json::parse(b.json);
    CHECK(rb["kappa"]["match"].get<std::string>() == "candidate_b");
    CHECK(rb["monotone"].get<bool>());
    const auto a = invoke({"approximate", "--s", "0.5", "--target", "x^2", "--k", "0", "--eps", "1e-2",
                           "--grid", "0:1:11"});
    CHECK(a.code == ExitCode::ok);
    const auto ra = nlohmann::json::parse(a.json);
    CHECK(ra["eps_achieved"].get<double>() < 1e-2);
    CHECK(first_lines(a.csv, 2).find("x,u,f,u_minus_f") != std::string::npos);
}
