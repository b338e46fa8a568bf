#include "caputo/piecewise_poly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "caputo/errors.hpp"

namespace caputo {

namespace {

constexpr double kContinuityTol = 1e-12;

double horner(const PiecewisePoly::Coeffs& c, double x, int order) {
    // Coefficients of the order-th derivative, evaluated by Horner.
    double result = 0.0;
    for (int k = PiecewisePoly::kMaxDegree; k >= order; --k) {
        double factor = 1.0;
        for (int r = 0; r < order; ++r) factor *= (k - r);
        result = result * x + factor * c[k];
    }
    return result;
}

bool matches(double a, double b) {
    return std::abs(a - b) <= kContinuityTol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

PiecewisePoly::PiecewisePoly(std::vector<double> breaks, std::vector<Coeffs> local_coeffs)
    : breaks_(std::move(breaks)), coeffs_(std::move(local_coeffs)), tail_(0.0) {
    if (!coeffs_.empty()) tail_ = coeffs_.front()[0];
    validate();
}

PiecewisePoly::PiecewisePoly(std::vector<double> breaks, std::vector<Coeffs> local_coeffs,
                             double left_tail_constant)
    : breaks_(std::move(breaks)), coeffs_(std::move(local_coeffs)), tail_(left_tail_constant) {
    validate();
    if (!matches(tail_, coeffs_.front()[0])) {
        throw DomainError("PiecewisePoly: left tail constant does not match the first piece");
    }
}

PiecewisePoly PiecewisePoly::from_global(std::vector<double> breaks,
                                         const std::vector<Coeffs>& global_coeffs) {
    if (breaks.size() != global_coeffs.size() + 1) {
        throw DomainError("PiecewisePoly: need one more breakpoint than pieces");
    }
    std::vector<Coeffs> local(global_coeffs.size());
    for (std::size_t i = 0; i < global_coeffs.size(); ++i) {
        // Taylor coefficients about the left breakpoint.
        const double t0 = breaks[i];
        for (int k = 0; k <= kMaxDegree; ++k) {
            double fact = 1.0;
            for (int r = 2; r <= k; ++r) fact *= r;
            local[i][k] = horner(global_coeffs[i], t0, k) / fact;
        }
    }
    return PiecewisePoly(std::move(breaks), std::move(local));
}

void PiecewisePoly::validate() const {
    if (coeffs_.empty() || breaks_.size() != coeffs_.size() + 1) {
        throw DomainError("PiecewisePoly: need at least one piece and one more breakpoint than pieces");
    }
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
        if (!(breaks_[i] < breaks_[i + 1])) {
            throw DomainError("PiecewisePoly: breakpoints must be strictly increasing");
        }
    }
    for (std::size_t i = 0; i + 1 < coeffs_.size(); ++i) {
        const double left = horner(coeffs_[i], breaks_[i + 1] - breaks_[i], 0);
        const double right = coeffs_[i + 1][0];
        if (!matches(left, right)) {
            throw DomainError("PiecewisePoly: discontinuity at breakpoint " +
                              std::to_string(breaks_[i + 1]));
        }
    }
}

std::size_t PiecewisePoly::locate(double t) const {
    if (t > breaks_.back()) {
        throw DomainError("PiecewisePoly: evaluation at " + std::to_string(t) +
                          " right of the last breakpoint " + std::to_string(breaks_.back()));
    }
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    const auto idx = static_cast<std::size_t>(it - breaks_.begin());
    return std::min(idx == 0 ? 0 : idx - 1, coeffs_.size() - 1);
}

double PiecewisePoly::value(double t) const {
    if (t <= breaks_.front()) return tail_;
    const std::size_t i = locate(t);
    return horner(coeffs_[i], t - breaks_[i], 0);
}

double PiecewisePoly::derivative(double t, int order) const {
    if (order == 0) return value(t);
    if (t < breaks_.front()) return 0.0;
    const std::size_t i = locate(t);
    return horner(coeffs_[i], t - breaks_[i], order);
}

bool PiecewisePoly::piece_is_constant(std::size_t i) const {
    const Coeffs& c = coeffs_.at(i);
    return c[1] == 0.0 && c[2] == 0.0 && c[3] == 0.0;
}

double PiecewisePoly::piece_derivative(std::size_t i, double local, int order) const {
    return horner(coeffs_.at(i), local, order);
}

}  // namespace caputo
