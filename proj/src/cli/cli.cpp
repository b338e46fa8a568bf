#include "caputo/cli/cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "caputo/blowup.hpp"
#include "caputo/caputo_operator.hpp"
#include "caputo/density_builder.hpp"
#include "caputo/errors.hpp"
#include "caputo/extension_solver.hpp"

namespace caputo::cli {

using nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw DomainError("not a number: '" + item + "'");
        }
        if (used != item.size()) throw DomainError("not a number: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw DomainError("empty number list");
    return out;
}

QuadratureOptions quadrature(const RunConfig& c) {
    QuadratureOptions q;
    q.panels = c.panels;
    q.grade = c.grade;
    q.gauss_points = c.gauss_points;
    return q;
}

double u_es1(double x) {
    return 2.0 / std::numbers::pi * (x * std::asin(1.0 / std::sqrt(x)) - std::sqrt(x - 1.0));
}

double psi_es2(double x) {
    const double pi = std::numbers::pi;
    return (27.0 * pi + std::sqrt(x - 1.0) * (-48.0 * x + 52.0) +
            std::asin(1.0 / std::sqrt(x)) * (96.0 * x * x - 144.0 * x) -
            std::asin(1.0 / std::sqrt(4.0 * x - 3.0)) * (96.0 * x * x - 144.0 * x + 54.0)) /
           (27.0 * pi);
}

struct Profile {
    CausalProfile data;
    double (*oracle)(double) = nullptr;  // closed-form extension, s = 1/2 only
};

Profile make_profile(const RunConfig& c, double default_b) {
    const std::string& name = c.profile;
    if (name.empty()) throw DomainError("missing --profile");
    if (name == "appendix-es1" || name == "appendix-es2") {
        if ((c.a && *c.a != 0.0) || (c.b && *c.b != 1.0)) {
            throw DomainError("profile " + name + " lives on [0, 1]; drop --a/--b");
        }
        Profile p{name == "appendix-es1" ? CausalProfile(PiecewisePoly({0.0, 1.0}, {{0.0, 1.0, 0.0, 0.0}}))
                                         : Psi0Profile::quadratic().causal()};
        if (c.s == 0.5) p.oracle = name == "appendix-es1" ? u_es1 : psi_es2;
        return p;
    }
    const double a = c.a.value_or(0.0);
    const double b = c.b.value_or(std::max(default_b, a + 1.0));
    if (!(a < b)) throw DomainError("need a < b");
    PiecewisePoly::Coeffs global{};
    if (name == "constant") {
        global = {1.0, 0.0, 0.0, 0.0};
    } else if (name == "linear") {
        global = {0.0, 1.0, 0.0, 0.0};
    } else if (name.rfind("poly:", 0) == 0) {
        const auto coeffs = parse_double_list(name.substr(5));
        if (coeffs.size() > 4) throw DomainError("poly profiles have degree <= 3");
        for (std::size_t i = 0; i < coeffs.size(); ++i) global[i] = coeffs[i];
    } else {
        throw DomainError("unknown profile '" + name + "' (constant, linear, poly:c0,c1,..., appendix-es1, appendix-es2)");
    }
    return Profile{CausalProfile(PiecewisePoly::from_global({a, b}, {global}))};
}

TargetFunction make_target(const std::string& name, int m) {
    if (name == "monomial") {
        std::vector<double> c(static_cast<std::size_t>(m + 1), 0.0);
        c.back() = 1.0;
        return target_polynomial(c);
    }
    if (name == "sin") return target_sin();
    if (name == "exp") return target_exp();
    if (name == "x^2") return target_polynomial({0.0, 0.0, 1.0});
    if (name.rfind("const:", 0) == 0) return target_polynomial(parse_double_list(name.substr(6)));
    if (name.rfind("poly:", 0) == 0) return target_polynomial(parse_double_list(name.substr(5)));
    throw DomainError("unknown target '" + name + "' (sin, exp, x^2, monomial, const:c, poly:c0,c1,...)");
}

void header(std::ostream& csv, const RunConfig& c, const std::vector<std::string>& columns) {
    csv << "# config-hash: " << c.hash() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) csv << (i ? "," : "") << columns[i];
    csv << "\n";
}

void row(std::ostream& csv, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) csv << (i ? "," : "") << fmt(values[i]);
    csv << "\n";
}

void validate(const RunConfig& c) {
    if (!(c.s > 0.0 && c.s < 1.0)) throw DomainError("--s must lie in (0, 1)");
    if (c.panels < 1) throw DomainError("--panels must be positive");
    if (c.grade != 0.0 && c.grade < 1.0) throw DomainError("--grade must be >= 1 (0 selects the default)");
    if (c.gauss_points < 2 || c.gauss_points > 40) throw DomainError("--gauss-points must be in [2, 40]");
    if (!(c.eps > 0.0)) throw DomainError("--eps must be positive");
    if (c.k < 0 || c.k > 4) throw DomainError("--k must be in [0, 4]");
    if (c.m < 0 || c.m > 4) throw DomainError("--m must be in [0, 4]");
    if (c.tol && !(*c.tol > 0.0)) throw DomainError("--tol must be positive");
    if (c.j_list.empty()) throw DomainError("--j-list must not be empty");
    for (int j : c.j_list) {
        if (j < 1) throw DomainError("--j-list entries must be positive");
    }
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::vector<double> Grid::points() const {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
}

std::string Grid::str() const { return fmt(lo) + ":" + fmt(hi) + ":" + std::to_string(n); }

Grid parse_grid(const std::string& text) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
    if (second == std::string::npos) throw DomainError("grid must look like lo:hi:n, got '" + text + "'");
    Grid g;
    g.lo = parse_double_list(text.substr(0, first)).at(0);
    g.hi = parse_double_list(text.substr(first + 1, second - first - 1)).at(0);
    const double n = parse_double_list(text.substr(second + 1)).at(0);
    if (n < 1 || n != std::floor(n) || n > 1e6) throw DomainError("grid point count must be a positive integer");
    g.n = static_cast<int>(n);
    if (!(g.lo <= g.hi) || (g.n > 1 && !(g.lo < g.hi))) throw DomainError("grid needs lo < hi");
    return g;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_double_list(text)) {
        if (v != std::floor(v) || std::abs(v) > 1e9) throw DomainError("expected integers in '" + text + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

ordered_json RunConfig::to_json() const {
    ordered_json j;
    j["command"] = command;
    j["s"] = s;
    if (!profile.empty()) j["profile"] = profile;
    if (a) j["a"] = *a;
    if (b) j["b"] = *b;
    if (grid) j["grid"] = grid->str();
    j["panels"] = panels;
    j["grade"] = grade;
    j["gauss_points"] = gauss_points;
    j["eps"] = eps;
    j["k"] = k;
    j["m"] = m;
    j["j_list"] = j_list;
    if (tol) j["tol"] = *tol;
    j["target"] = target;
    return j;
}

std::string RunConfig::hash() const {
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << fnv1a(to_json().dump());
    return ss.str();
}

RunConfig parse_arguments(int argc, const char* const* argv) {
    CLI::App app{"Caputo derivatives, stationary extensions, blow-up limits and density approximants"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig c;
    std::string grid_text;
    std::string j_text;
    std::string config_path;
    double a = 0.0;
    double b = 0.0;
    double tol = 0.0;
    auto* o_s = app.add_option("--s", c.s, "fractional order in (0,1)");
    auto* o_profile = app.add_option("--profile", c.profile,
                                     "constant | linear | poly:c0,c1,.. | appendix-es1 | appendix-es2");
    auto* o_a = app.add_option("--a", a, "initial point");
    auto* o_b = app.add_option("--b", b, "right end of the data");
    auto* o_grid = app.add_option("--grid", grid_text, "evaluation grid lo:hi:n");
    auto* o_panels = app.add_option("--panels", c.panels, "panels of the cubic product rule");
    auto* o_grade = app.add_option("--grade", c.grade, "mesh grading exponent (0 = default)");
    auto* o_gauss = app.add_option("--gauss-points", c.gauss_points, "Gauss points per panel near junctions");
    auto* o_eps = app.add_option("--eps", c.eps, "approximation tolerance");
    auto* o_k = app.add_option("--k", c.k, "derivative order of the C^k norm");
    auto* o_m = app.add_option("--m", c.m, "monomial order");
    auto* o_j = app.add_option("--j-list", j_text, "comma-separated blow-up indices");
    auto* o_tol = app.add_option("--tol", tol, "residual tolerance");
    auto* o_target = app.add_option("--target", c.target, "sin | exp | x^2 | monomial (x^m) | const:c | poly:c0,c1,..");
    app.add_option("--out", c.out, "CSV output path (default stdout)");
    app.add_option("--report", c.report, "JSON report path (default stderr)");
    app.add_option("--config", config_path, "JSON file with defaults for any flag");
    app.add_subcommand("derivative", "Caputo derivative of a profile over a grid");
    app.add_subcommand("extend", "stationary extension of a profile past b, with residual");
    app.add_subcommand("blowup", "blow-up limit constant and convergence table");
    app.add_subcommand("approximate", "stationary approximant of a target function in C^k([0,1])");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            std::cout << app.help();
            throw;
        }
        throw DomainError(e.what());
    }
    c.command = app.get_subcommands().front()->get_name();

    bool a_set = false;
    bool b_set = false;
    bool tol_set = false;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw DomainError("cannot read config file " + config_path);
        nlohmann::json file;
        try {
            in >> file;
        } catch (const nlohmann::json::exception& e) {
            throw DomainError(std::string("config file: ") + e.what());
        }
        if (!file.is_object()) throw DomainError("config file must hold a JSON object");
        try {
            for (auto it = file.begin(); it != file.end(); ++it) {
                const std::string& key = it.key();
                const auto& v = it.value();
                const auto unset = [](CLI::Option* o) { return o->count() == 0; };
                if (key == "s") { if (unset(o_s)) c.s = v.get<double>(); }
                else if (key == "profile") { if (unset(o_profile)) c.profile = v.get<std::string>(); }
                else if (key == "a") { if (unset(o_a)) { a = v.get<double>(); a_set = true; } }
                else if (key == "b") { if (unset(o_b)) { b = v.get<double>(); b_set = true; } }
                else if (key == "grid") { if (unset(o_grid)) grid_text = v.get<std::string>(); }
                else if (key == "panels") { if (unset(o_panels)) c.panels = v.get<int>(); }
                else if (key == "grade") { if (unset(o_grade)) c.grade = v.get<double>(); }
                else if (key == "gauss_points" || key == "gauss-points") { if (unset(o_gauss)) c.gauss_points = v.get<int>(); }
                else if (key == "eps") { if (unset(o_eps)) c.eps = v.get<double>(); }
                else if (key == "k") { if (unset(o_k)) c.k = v.get<int>(); }
                else if (key == "m") { if (unset(o_m)) c.m = v.get<int>(); }
                else if (key == "j_list" || key == "j-list") {
                    if (unset(o_j)) j_text = v.is_string() ? v.get<std::string>() : "";
                    if (unset(o_j) && v.is_array()) c.j_list = v.get<std::vector<int>>();
                }
                else if (key == "tol") { if (unset(o_tol)) { tol = v.get<double>(); tol_set = true; } }
                else if (key == "target") { if (unset(o_target)) c.target = v.get<std::string>(); }
                else throw DomainError("config file: unknown key '" + key + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw DomainError(std::string("config file: ") + e.what());
        }
    }
    if (a_set || o_a->count() > 0) c.a = a;
    if (b_set || o_b->count() > 0) c.b = b;
    if (tol_set || o_tol->count() > 0) c.tol = tol;
    if (!grid_text.empty()) c.grid = parse_grid(grid_text);
    if (!j_text.empty()) c.j_list = parse_int_list(j_text);
    validate(c);
    return c;
}

int run_derivative(const RunConfig& c, std::ostream& csv, ordered_json& report) {
    const Grid grid = c.grid.value_or(parse_grid("0.1:2:20"));
    const Profile p = make_profile(c, grid.hi);
    const FractionalOrder s(c.s);
    const ExtensionSolution u(p.data, s, quadrature(c));
    const DerivativeSource src = u.derivative_source();
    header(csv, c, {"x", "caputo"});
    double worst = 0.0;
    for (double x : grid.points()) {
        const double d = caputo_derivative(src, p.data.a(), s, x, quadrature(c));
        worst = std::max(worst, std::abs(d));
        row(csv, {x, d});
    }
    report["max_abs"] = worst;
    report["exit_reason"] = "ok";
    return ok;
}

int run_extend(const RunConfig& c, std::ostream& csv, ordered_json& report) {
    const Profile p = make_profile(c, 1.0);
    const double b = p.data.b();
    const Grid grid = c.grid.value_or(parse_grid(fmt(b + 0.05) + ":" + fmt(b + 4.0) + ":50"));
    if (!(grid.lo > b)) throw DomainError("extend needs grid points right of b = " + fmt(b));
    const FractionalOrder s(c.s);
    const ExtensionSolution u(p.data, s, quadrature(c));
    const DerivativeSource src = u.derivative_source();
    header(csv, c, {"x", "u", "g", "residual"});
    double worst = 0.0;
    double deviation = 0.0;
    for (double x : grid.points()) {
        const double ux = u.value(x);
        const double r = caputo_derivative(src, p.data.a(), s, x, quadrature(c));
        worst = std::max(worst, std::abs(r));
        if (p.oracle) deviation = std::max(deviation, std::abs(ux - p.oracle(x)));
        row(csv, {x, ux, u.g(x), r});
    }
    const double tol = c.tol.value_or(1e-5);
    report["residual_max"] = worst;
    if (p.oracle) report["oracle_deviation"] = deviation;
    report["tol"] = tol;
    report["exit_reason"] = worst <= tol ? "ok" : "residual above tolerance";
    return worst <= tol ? ok : target_missed;
}

int run_blowup(const RunConfig& c, std::ostream& csv, ordered_json& report) {
    if (!c.profile.empty() && c.profile != "appendix-es2" && c.profile != "quadratic") {
        throw DomainError("blowup uses the quadratic psi_0 profile (appendix-es2)");
    }
    const Grid grid = c.grid.value_or(parse_grid("0.5:2:200"));
    if (grid.n < 2) throw DomainError("blowup needs at least two grid points");
    const FractionalOrder s(c.s);
    const auto psi = build_psi(s, Psi0Profile::quadratic(), quadrature(c));
    const BlowupConvergence conv = check_blowup_convergence(psi, c.j_list, grid.lo, grid.hi, grid.n);
    header(csv, c, {"j", "sup_error"});
    ordered_json rows = ordered_json::array();
    for (const auto& r : conv.rows) {
        row(csv, {static_cast<double>(r.j), r.sup_error});
        rows.push_back({{"j", r.j}, {"sup_error", r.sup_error}});
    }
    const KappaEstimate& k = conv.kappa;
    report["kappa"] = {{"fitted", k.kappa},
                       {"candidate_a", k.candidate_a},
                       {"candidate_b", k.candidate_b},
                       {"match", to_string(k.match)},
                       {"fit_exponent", k.fit_exponent},
                       {"fit_residual", k.fit_residual},
                       {"g_at_one", k.g_at_one}};
    report["kappa_note"] =
        "candidate_a = beta(1,s) g(1); candidate_b = (sin(pi s)/pi) beta(1,s) g(1); they differ by the "
        "factor pi/sin(pi s) and the fitted limit decides";
    report["convergence"] = rows;
    report["rate"] = conv.rate;
    report["monotone"] = conv.monotone;
    const bool matched = k.match == KappaMatch::candidate_a || k.match == KappaMatch::candidate_b;
    if (!matched) {
        report["exit_reason"] = "fitted kappa matches neither candidate within 1%";
        return target_missed;
    }
    if (!(k.kappa > 0.0)) {
        report["exit_reason"] = "fitted kappa is not positive";
        return target_missed;
    }
    report["exit_reason"] = "ok";
    return ok;
}

int run_approximate(const RunConfig& c, std::ostream& csv, ordered_json& report) {
    const TargetFunction f = make_target(c.target, c.m);
    const Grid grid = c.grid.value_or(parse_grid("0:1:101"));
    if (grid.lo < 0.0 || grid.hi > 1.0) throw DomainError("approximate works on [0, 1]");
    const FractionalOrder s(c.s);
    ApproximationOptions opts;
    opts.quadrature = quadrature(c);
    const auto psi = build_psi(s, Psi0Profile::quadratic(), opts.quadrature);
    const ApproximationResult res = approximate_function(f, c.k, c.eps, psi, opts);
    const ApproximationReport& r = res.report;

    std::vector<std::string> cols{"x", "u", "f", "u_minus_f"};
    for (int l = 1; l <= c.k; ++l) {
        cols.push_back("u_d" + std::to_string(l));
        cols.push_back("f_d" + std::to_string(l));
    }
    header(csv, c, cols);
    for (double x : grid.points()) {
        std::vector<double> v{x, res.approximant.value(x), f.eval(x, 0), res.approximant.value(x) - f.eval(x, 0)};
        for (int l = 1; l <= c.k; ++l) {
            v.push_back(res.approximant.derivative(x, l));
            v.push_back(f.eval(x, l));
        }
        row(csv, v);
    }

    ordered_json pieces = ordered_json::array();
    ordered_json deltas = ordered_json::array();
    for (const auto& piece : res.approximant.pieces()) {
        const auto& approx = piece.result.approx;
        ordered_json item{{"m", piece.m},
                          {"coefficient", piece.coefficient},
                          {"budget", piece.budget},
                          {"delta", approx.delta()},
                          {"error", piece.result.error},
                          {"scale", approx.scale()},
                          {"initial_point", approx.initial_point()}};
        if (approx.jet()) {
            item["p"] = approx.jet()->p();
            item["R"] = approx.jet()->R();
            item["jet_residual"] = approx.jet()->jet_residual();
            item["jet_condition"] = approx.jet()->condition_number();
            item["jet_amplification"] = approx.jet_amplification();
        }
        pieces.push_back(item);
        deltas.push_back(approx.delta());
    }
    const double residual_tol = c.tol.value_or(1e-4);
    report["target"] = r.target;
    report["k"] = r.k;
    report["eps_requested"] = r.eps_requested;
    report["eps_achieved"] = r.eps_achieved;
    report["errors"] = {{"per_derivative", r.per_derivative}};
    report["polynomial_degree"] = r.degree;
    report["polynomial_coefficients"] = r.coefficients;
    report["polynomial_error"] = r.polynomial_error;
    report["error_bound"] = r.error_bound;
    report["residual_max"] = r.residual.max_abs;
    report["residual_tol"] = residual_tol;
    report["delta"] = deltas;
    report["initial_point"] = r.initial_point;
    report["pieces"] = pieces;
    if (!(r.eps_achieved < c.eps)) {
        report["exit_reason"] = "C^k error above eps";
        return target_missed;
    }
    if (!(r.residual.max_abs <= residual_tol)) {
        report["exit_reason"] = "Caputo residual above tolerance";
        return target_missed;
    }
    report["exit_reason"] = "ok";
    return ok;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = parse_arguments(argc, argv);
    } catch (const CLI::Success&) {
        return ok;
    } catch (const CLI::Error& e) {
        err << e.what() << "\n";
        return invalid_input;
    } catch (const std::exception& e) {
        err << "invalid input: " << e.what() << "\n";
        return invalid_input;
    }

    ordered_json report;
    report["command"] = config.command;
    report["config"] = config.to_json();
    std::ostringstream csv;
    int code = ok;
    try {
        if (config.command == "derivative") code = run_derivative(config, csv, report);
        else if (config.command == "extend") code = run_extend(config, csv, report);
        else if (config.command == "blowup") code = run_blowup(config, csv, report);
        else code = run_approximate(config, csv, report);
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return invalid_input;
    } catch (const NumericalFailure& e) {
        report["exit_reason"] = e.what();
        code = target_missed;
    }

    if (config.out.empty()) {
        out << csv.str();
    } else {
        std::ofstream f(config.out, std::ios::binary);
        if (!f) {
            err << "cannot write " << config.out << "\n";
            return invalid_input;
        }
        f << csv.str();
    }
    const std::string json = report.dump(2) + "\n";
    if (config.report.empty()) {
        err << json;
    } else {
        std::ofstream f(config.report, std::ios::binary);
        if (!f) {
            err << "cannot write " << config.report << "\n";
            return invalid_input;
        }
        f << json;
    }
    return code;
}

}  // namespace caputo::cli
