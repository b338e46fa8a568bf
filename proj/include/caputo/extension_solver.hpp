#pragma once

#include <array>
#include <vector>

#include "caputo/caputo_operator.hpp"
#include "caputo/quadrature.hpp"
#include "caputo/special_functions.hpp"

namespace caputo {

/// g(x) = -int_a^b phi'(t) (x - t)^(-s) dt, the forcing induced by the data on (b, inf).
double compute_g(const CausalProfile& profile, const FractionalOrder& s, double x);

/// The Caputo-stationary extension of a causal profile past b:
///   u(x) = phi(b) + (sin(pi s)/pi) int_b^x g(t) (x - t)^(s-1) dt,  x > b,
/// and u = phi on (-inf, b].
///
/// g and all its derivatives are exact for polynomial data (one product-rule panel per piece), so
/// nothing is tabulated. Derivatives of u follow from differentiating the representation under
/// the integral. When phi' is supported away from b, g is analytic at b and the integral is
/// anchored there. When phi' reaches b, g has a (x - b)^(1-s) term; the integral is then split at
/// c = (b + y)/2 and only the part over [c, y] is differentiated through g.
class ExtensionSolution {
public:
    static constexpr int kMaxDerivativeOrder = 8;
    static constexpr double kJunctionExclusion = 1e-3;

    ExtensionSolution(CausalProfile profile, const FractionalOrder& s,
                      const QuadratureOptions& options = {});

    const CausalProfile& profile() const noexcept { return profile_; }
    const FractionalOrder& order() const noexcept { return s_; }
    const QuadratureOptions& options() const noexcept { return options_; }
    double junction() const noexcept { return profile_.b(); }

    /// Right edge of the support of phi'; g is analytic on (support_end, inf).
    double support_end() const noexcept { return support_end_; }
    bool data_reaches_junction() const noexcept { return touching_; }

    double value(double x) const;
    double g(double x) const { return g_derivative(x, 0); }

    /// i-th derivative of g for x >= b (x > b when i >= 1 and phi' reaches b).
    double g_derivative(double x, int i) const;

    /// u^(n)(y), refusing y within kJunctionExclusion of b and n > kMaxDerivativeOrder.
    double derivative(double y, int n) const;

    /// u^(n)(y) for any y > b and n <= kMaxDerivativeOrder.
    double derivative_unchecked(double y, int n) const;

    /// u'(b + d) d^(1-s), bounded as d -> 0+.
    double regularized_derivative(double d) const;

    /// Derivative source of u on the whole line. It refers to this solution.
    DerivativeSource derivative_source() const;

private:
    void check_order(int n) const;
    double junction_terms(double d, double e, int n) const;
    double integral_terms(double d, double e, int n) const;
    double derivative_at_offset(double d, int n) const;
    double g_at_offset(double tau, int i) const;

    CausalProfile profile_;
    FractionalOrder s_;
    QuadratureOptions options_;
    double support_end_;
    bool touching_;
    std::vector<std::size_t> active_pieces_;
    std::vector<WeightedGauss> rules_;  // rules_[n] weights (y - t)^(s - 1 - n)
    std::array<double, kMaxDerivativeOrder + 1> g_at_b_{};
};

ExtensionSolution solve_extension(CausalProfile profile, const FractionalOrder& s,
                                  const QuadratureOptions& options = {});

double extension_derivative(const ExtensionSolution& sol, int n, double y);

}  // namespace caputo
