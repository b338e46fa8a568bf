#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "caputo/blowup.hpp"
#include "caputo/caputo_operator.hpp"

namespace caputo {

/// Rows are (member, point) pairs, member-major; column l holds v_j^(l)(x).
Eigen::MatrixXd jet_matrix(const std::vector<BlowupMember>& members, const std::vector<double>& points,
                           int m);

struct JetOptions {
    std::vector<int> j_pool{2, 4, 8, 16, 32};
    std::vector<double> p_candidates{0.5, 1.0, 2.0};
    double jet_tol = 1e-8;
    double sv_cutoff = 1e-10;  // singular values below sv_cutoff * sigma_max are dropped
};

/// v = sum_i c_i v_{j_i} with v^(l)(p) = 0 for l < m and v^(m)(p) = 1. Every member is constant
/// left of -R with R = max j, so v is causal from -R and stationary on (0, inf).
class JetCombination {
public:
    JetCombination(std::vector<BlowupMember> members, std::vector<double> coefficients, double p, int m,
                   double residual, double condition);

    const std::vector<BlowupMember>& members() const noexcept { return members_; }
    const std::vector<double>& coefficients() const noexcept { return coefficients_; }
    double p() const noexcept { return p_; }
    int m() const noexcept { return m_; }
    double R() const noexcept { return R_; }
    double initial_point() const noexcept { return -R_; }
    double jet_residual() const noexcept { return residual_; }
    double condition_number() const noexcept { return condition_; }
    const ExtensionSolution& psi() const { return members_.front().psi(); }

    double value(double x) const;
    double derivative(double x, int l) const;

    /// D_{-R}^s v(y) for y > 0, through D_{-j}^s v_j(y) = D_0^s psi(y/j + 1).
    double caputo(double y, const QuadratureOptions& options = {}) const;

    DerivativeSource derivative_source() const;

private:
    std::vector<BlowupMember> members_;
    std::vector<double> coefficients_;
    double p_;
    int m_;
    double R_;
    double residual_;
    double condition_;
};

JetCombination prescribe_jet(std::shared_ptr<const ExtensionSolution> psi, int m,
                             const JetOptions& options = {});

JetCombination prescribe_jet(const FractionalOrder& s, const Psi0Profile& profile, int m,
                             const JetOptions& options = {});

/// u(x) = m! v(delta x + p) / delta^m, approximating x^m on [0, 1]. For m = 0, u = 1.
class MonomialApproximation {
public:
    MonomialApproximation(int m, std::optional<JetCombination> jet, double delta);

    int m() const noexcept { return m_; }
    double delta() const noexcept { return delta_; }
    double scale() const noexcept { return scale_; }
    const std::optional<JetCombination>& jet() const noexcept { return jet_; }

    /// (-p - R) / delta; for m = 0 any point works and 0 is reported.
    double initial_point() const;

    double value(double x) const { return derivative(x, 0); }
    double derivative(double x, int l) const;
    double caputo(double x, const QuadratureOptions& options = {}) const;

    /// sup-errors of u^(l) - (x^m)^(l) on the grid, l = 0..k.
    std::vector<double> errors(int k, int samples = 1000) const;

    /// m! jet_residual / delta^m: bound on |u^(l)(0)| coming from the imperfect jet.
    double jet_amplification() const;

private:
    int m_;
    std::optional<JetCombination> jet_;
    double delta_;
    double scale_;
};

struct MonomialResult {
    MonomialApproximation approx;
    std::vector<double> errors;  // per derivative at the accepted delta
    double error = 0.0;          // C^k grid error
    std::vector<std::pair<double, double>> sweep;  // (delta, error) for every delta tried
};

/// Halves delta from 1 until the C^k grid error drops below eps.
MonomialResult approximate_monomial(std::shared_ptr<const ExtensionSolution> psi, int m, int k, double eps,
                                    const JetOptions& options = {});

MonomialResult approximate_monomial(const FractionalOrder& s, const Psi0Profile& profile, int m, int k,
                                    double eps, const JetOptions& options = {});

/// Target f on [0, 1] with derivatives: eval(x, l) = f^(l)(x).
struct TargetFunction {
    std::string name;
    std::function<double(double, int)> eval;
};

/// sum_i coeffs[i] x^i
TargetFunction target_polynomial(std::vector<double> coeffs);
TargetFunction target_sin();
TargetFunction target_exp();

struct ApproximationOptions {
    JetOptions jet;
    int max_degree = 12;
    int grid = 1000;
    int residual_points = 200;
    double coefficient_floor = 1e-13;  // relative to the largest coefficient
    QuadratureOptions quadrature;
};

struct ApproximationPiece {
    int m;
    double coefficient;
    double budget;
    MonomialResult result;
};

struct ApproximationReport {
    std::string target;
    int k = 0;
    double eps_requested = 0.0;
    double eps_achieved = 0.0;
    int degree = 0;
    std::vector<double> coefficients;  // monomial coefficients of P
    double polynomial_error = 0.0;
    std::vector<double> per_derivative;  // sup |u^(l) - f^(l)|, l = 0..k
    double initial_point = 0.0;
    double error_bound = 0.0;  // polynomial_error + sum |c_m| piece error
    ResidualTable residual;
};

/// Sum of rescaled jet combinations approximating f in C^k([0, 1]).
class Approximant {
public:
    explicit Approximant(std::vector<ApproximationPiece> pieces) : pieces_(std::move(pieces)) {}

    const std::vector<ApproximationPiece>& pieces() const noexcept { return pieces_; }
    double value(double x) const { return derivative(x, 0); }
    double derivative(double x, int l) const;

    /// D_a^s u(x) with a the report's initial point, by linearity over the pieces.
    double caputo(double x, const QuadratureOptions& options = {}) const;

private:
    std::vector<ApproximationPiece> pieces_;
};

struct ApproximationResult {
    ApproximationReport report;
    Approximant approximant;
};

/// Chebyshev interpolant of minimal degree with C^k error below eps/2, monomials approximated
/// with budgets eps / (2 |c_m| (n + 1)).
ApproximationResult approximate_function(const TargetFunction& f, int k, double eps,
                                         std::shared_ptr<const ExtensionSolution> psi,
                                         const ApproximationOptions& options = {});

ApproximationResult approximate_function(const TargetFunction& f, int k, double eps,
                                         const FractionalOrder& s, const Psi0Profile& profile,
                                         const ApproximationOptions& options = {});

/// Monomial coefficients of the degree-n Chebyshev interpolant of f on [0, 1].
std::vector<double> chebyshev_monomials(const std::function<double(double)>& f, int n);

/// sum_{l<=k} sup over a uniform grid of [0,1] of |p^(l) - f^(l)|, and the per-order sups.
double polynomial_ck_error(const std::vector<double>& coeffs, const TargetFunction& f, int k, int samples,
                           std::vector<double>* per_order = nullptr);

}  // namespace caputo
