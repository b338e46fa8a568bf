#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "caputo/piecewise_poly.hpp"
#include "caputo/quadrature.hpp"
#include "caputo/special_functions.hpp"

namespace caputo {

/// Integrable blow-up of u' at a point J: u'(J + d) = regularized(d) d^exponent for d > 0.
/// regularized takes the offset d so that points very close to J keep their precision.
struct Junction {
    double point;
    double exponent;
    std::function<double(double)> regularized;
};

/// What the Caputo operator needs to know about u: its derivative and where it is not smooth.
///
/// Between consecutive breakpoints u' is smooth. Segments ending at or before polynomial_until
/// are polynomial of degree <= 3.
struct DerivativeSource {
    std::function<double(double)> derivative;
    std::vector<double> breakpoints;
    double polynomial_until = -std::numeric_limits<double>::infinity();
    std::optional<Junction> junction;
};

/// Piecewise-polynomial data phi on (-inf, b], constant left of a.
class CausalProfile {
public:
    CausalProfile(PiecewisePoly data, double a, double b);

    /// a and b taken from the first and last breakpoints.
    explicit CausalProfile(PiecewisePoly data);

    const PiecewisePoly& data() const noexcept { return data_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }

    double value(double t) const { return data_.value(t); }
    double derivative(double t, int order = 1) const { return data_.derivative(t, order); }

    DerivativeSource derivative_source() const;

private:
    PiecewisePoly data_;
    double a_;
    double b_;
};

/// D_a^s u(x) = 1/Gamma(1-s) int_a^x u'(t) (x-t)^(-s) dt; exactly 0 for x <= a.
double caputo_derivative(const DerivativeSource& u, double a, const FractionalOrder& s, double x,
                         const QuadratureOptions& options = {});

struct ResidualTable {
    std::vector<double> x;
    std::vector<double> value;
    double max_abs = 0.0;
};

ResidualTable caputo_residual(const DerivativeSource& u, double a, const FractionalOrder& s,
                              const std::vector<double>& grid,
                              const QuadratureOptions& options = {});

}  // namespace caputo
