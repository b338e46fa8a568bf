#pragma once

#include <memory>
#include <vector>

#include "caputo/caputo_operator.hpp"
#include "caputo/extension_solver.hpp"
#include "caputo/piecewise_poly.hpp"

namespace caputo {

/// Data psi_0 on (-inf, 1]: constant left of 0, zero on [3/4, 1], strictly decreasing on [0, 3/4)
/// and C^1 on [0, 1]. Checked on a 1000-point sample at construction.
class Psi0Profile {
public:
    explicit Psi0Profile(PiecewisePoly data);

    /// (16/9)(x - 3/4)^2 on [0, 3/4], zero on [3/4, 1].
    static Psi0Profile quadratic();

    const PiecewisePoly& data() const noexcept { return data_; }
    double at_zero() const { return data_.value(0.0); }
    CausalProfile causal() const { return CausalProfile(data_, 0.0, 1.0); }

private:
    PiecewisePoly data_;
};

/// psi solves D_0^s psi = 0 on (1, inf) with psi = psi_0 on (-inf, 1].
std::shared_ptr<const ExtensionSolution> build_psi(const FractionalOrder& s, const Psi0Profile& profile,
                                                   const QuadratureOptions& options = {});

/// v_j(x) = j^s psi(x/j + 1). Stationary from -j on (0, inf) and zero on [-j/4, 0].
class BlowupMember {
public:
    BlowupMember(int j, std::shared_ptr<const ExtensionSolution> psi);

    int j() const noexcept { return j_; }
    const ExtensionSolution& psi() const noexcept { return *psi_; }
    const std::shared_ptr<const ExtensionSolution>& psi_ptr() const noexcept { return psi_; }

    double value(double x) const;

    /// v_j^(l)(x) = j^(s-l) psi^(l)(x/j + 1); for x > 0 subject to the extension's checks.
    double derivative(double x, int l) const;

    DerivativeSource derivative_source() const;

private:
    int j_;
    std::shared_ptr<const ExtensionSolution> psi_;
};

double eval_vj(const BlowupMember& member, double x);

enum class KappaMatch { none, candidate_a, candidate_b, both };

const char* to_string(KappaMatch m);

struct KappaEstimate {
    double kappa = 0.0;         // intercept of psi(1+eps) eps^(-s) = kappa + C eps
    double slope = 0.0;         // C
    double fit_exponent = 0.0;  // slope of log psi(1+eps) against log eps
    double fit_residual = 0.0;  // max abs deviation from the linear fit
    double g_at_one = 0.0;
    double candidate_a = 0.0;   // beta(1,s) g(1)
    double candidate_b = 0.0;   // (sin(pi s)/pi) beta(1,s) g(1)
    KappaMatch match = KappaMatch::none;
    std::vector<double> eps;
    std::vector<double> scaled;            // psi(1+eps) eps^(-s)
    std::vector<double> expansion;         // C_i = beta(i+1, s) g^(i)(1) / i!
};

/// eps = 2^-5 ... 2^-14.
std::vector<double> default_eps_grid();

KappaEstimate estimate_kappa(const FractionalOrder& s, const Psi0Profile& profile,
                             const std::vector<double>& eps_grid = default_eps_grid(),
                             const QuadratureOptions& options = {}, int expansion_terms = 5);

KappaEstimate estimate_kappa(const ExtensionSolution& psi,
                             const std::vector<double>& eps_grid = default_eps_grid(),
                             int expansion_terms = 5);

struct ConvergenceRow {
    int j;
    double sup_error;
};

struct BlowupConvergence {
    KappaEstimate kappa;
    std::vector<ConvergenceRow> rows;
    double rate = 0.0;  // least-squares slope of log sup_error against log j
    bool monotone = false;
};

std::vector<int> default_j_list();

/// sup over a uniform grid of [lo, hi] of |v_j(x) - kappa x^s| for each j.
BlowupConvergence check_blowup_convergence(const FractionalOrder& s, const Psi0Profile& profile,
                                           const std::vector<int>& j_list, double lo, double hi,
                                           const QuadratureOptions& options = {}, int samples = 200);

BlowupConvergence check_blowup_convergence(std::shared_ptr<const ExtensionSolution> psi,
                                           const std::vector<int>& j_list, double lo, double hi,
                                           int samples = 200);

}  // namespace caputo
