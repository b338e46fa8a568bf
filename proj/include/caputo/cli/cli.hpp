#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace caputo::cli {

enum ExitCode : int { ok = 0, invalid_input = 2, target_missed = 3 };

struct Grid {
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;

    std::vector<double> points() const;
    std::string str() const;
};

Grid parse_grid(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

/// Everything a run depends on. Two runs with equal configs produce identical bytes.
struct RunConfig {
    std::string command;
    double s = 0.5;
    std::string profile;
    std::optional<double> a;
    std::optional<double> b;
    std::optional<Grid> grid;
    int panels = 256;
    double grade = 0.0;
    int gauss_points = 10;
    double eps = 1e-2;
    int k = 0;
    int m = 1;
    std::vector<int> j_list{2, 4, 8, 16, 32, 64};
    std::optional<double> tol;
    std::string target = "x^2";
    std::string out;
    std::string report;

    nlohmann::ordered_json to_json() const;
    std::string hash() const;
};

/// Parses argv (including the program name) into a config, applying a --config JSON file under
/// the explicit flags. Throws DomainError on invalid input.
RunConfig parse_arguments(int argc, const char* const* argv);

int run_derivative(const RunConfig& config, std::ostream& csv, nlohmann::ordered_json& report);
int run_extend(const RunConfig& config, std::ostream& csv, nlohmann::ordered_json& report);
int run_blowup(const RunConfig& config, std::ostream& csv, nlohmann::ordered_json& report);
int run_approximate(const RunConfig& config, std::ostream& csv, nlohmann::ordered_json& report);

/// Full command line: parse, run, write CSV and JSON, map failures to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace caputo::cli
