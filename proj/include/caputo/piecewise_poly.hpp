#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace caputo {

/// Continuous piecewise polynomial of degree <= 3, constant to the left of the first breakpoint.
///
/// Piece i lives on [breaks[i], breaks[i+1]] and stores coefficients in the local variable
/// (t - breaks[i]). Evaluation right of the last breakpoint is a domain error: these functions
/// carry prescribed data on a half line (-inf, b].
class PiecewisePoly {
public:
    static constexpr int kMaxDegree = 3;
    using Coeffs = std::array<double, kMaxDegree + 1>;

    /// Local-basis coefficients; the left tail is the value at the first breakpoint.
    PiecewisePoly(std::vector<double> breaks, std::vector<Coeffs> local_coeffs);

    /// Same, with an explicit left tail that must match the first piece.
    PiecewisePoly(std::vector<double> breaks, std::vector<Coeffs> local_coeffs,
                  double left_tail_constant);

    /// Pieces given as polynomials in the global variable t.
    static PiecewisePoly from_global(std::vector<double> breaks,
                                     const std::vector<Coeffs>& global_coeffs);

    double value(double t) const;

    /// order-th derivative; at interior breakpoints the right derivative is used.
    /// Left of the first breakpoint every derivative is zero.
    double derivative(double t, int order = 1) const;

    std::span<const double> breakpoints() const noexcept { return breaks_; }
    std::size_t piece_count() const noexcept { return coeffs_.size(); }
    const Coeffs& piece_coeffs(std::size_t i) const { return coeffs_.at(i); }
    double lo() const noexcept { return breaks_.front(); }
    double hi() const noexcept { return breaks_.back(); }
    double left_tail_constant() const noexcept { return tail_; }

    /// True when the derivative vanishes identically on piece i.
    bool piece_is_constant(std::size_t i) const;

    /// Derivative of piece i in its local variable.
    double piece_derivative(std::size_t i, double local, int order = 1) const;

private:
    std::size_t locate(double t) const;
    void validate() const;

    std::vector<double> breaks_;
    std::vector<Coeffs> coeffs_;
    double tail_;
};

}  // namespace caputo
