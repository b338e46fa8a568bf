#include "caputo/extension_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "caputo/errors.hpp"

namespace caputo {

namespace {

constexpr double kSplitFloor = 1e-12;

}  // namespace

double compute_g(const CausalProfile& profile, const FractionalOrder& s, double x) {
    if (!(x >= profile.b())) throw DomainError("compute_g: need x >= b");
    return ExtensionSolution(profile, s).g(x);
}

ExtensionSolution::ExtensionSolution(CausalProfile profile, const FractionalOrder& s,
                                     const QuadratureOptions& options)
    : profile_(std::move(profile)), s_(s), options_(options), support_end_(profile_.a()),
      touching_(false) {
    if (options_.gauss_points < 2 || options_.gauss_points > 40) {
        throw DomainError("ExtensionSolution: gauss_points must be in [2, 40]");
    }
    if (!(options_.ratio > 0.0 && options_.ratio <= 4.0)) {
        throw DomainError("ExtensionSolution: ratio must be in (0, 4]");
    }
    const PiecewisePoly& data = profile_.data();
    for (std::size_t i = 0; i < data.piece_count(); ++i) {
        if (data.piece_is_constant(i)) continue;
        active_pieces_.push_back(i);
        support_end_ = data.breakpoints()[i + 1];
    }
    touching_ = !active_pieces_.empty() && support_end_ == profile_.b();
    for (int n = 0; n <= kMaxDerivativeOrder; ++n) {
        rules_.emplace_back(options_.gauss_points, s_.value() - 1.0 - n);
    }
    if (!touching_) {
        for (int i = 0; i <= kMaxDerivativeOrder; ++i) g_at_b_[i] = g_derivative(profile_.b(), i);
    }
}

double ExtensionSolution::g_derivative(double x, int i) const {
    if (!(x >= profile_.b())) {
        throw DomainError("g: evaluation at " + std::to_string(x) + " left of b");
    }
    return g_at_offset(x - profile_.b(), i);
}

double ExtensionSolution::g_at_offset(double tau, int i) const {
    const PiecewisePoly& data = profile_.data();
    const ProductRule& rule = ProductRule::cubic();
    const double b = profile_.b();
    std::array<double, 4> t{};
    std::array<double, 4> w{};
    double sum = 0.0;
    for (std::size_t p : active_pieces_) {
        const double lo = data.breakpoints()[p];
        const double hi = data.breakpoints()[p + 1];
        rule.panel_beyond(lo, hi, (b - hi) + tau, -s_.value() - i, t, w);
        for (std::size_t k = 0; k < t.size(); ++k) sum += w[k] * data.piece_derivative(p, t[k] - lo, 1);
    }
    return -falling_neg_s(s_.value(), i) * sum;
}

double ExtensionSolution::integral_terms(double d, double e, int n) const {
    // Offsets from b: evaluation at b + d, split at b + e.
    const double b = profile_.b();
    double total = 0.0;
    if (e > 0.0) {
        const auto near = geometric_nodes(0.0, e, SingularEnd::left, 0.0, options_.ratio, kSplitFloor);
        total += falling_s_minus_one(s_.value(), n) *
                 rules_[static_cast<std::size_t>(n)].integrate([&](double tau) { return g_at_offset(tau, 0); }, near, d);
    }
    const auto far = geometric_nodes(e, d, SingularEnd::left, e + (b - support_end_), options_.ratio);
    total += rules_[0].integrate([&](double tau) { return g_at_offset(tau, n); }, far, d);
    return total;
}

double ExtensionSolution::junction_terms(double d, double e, int n) const {
    const double sv = s_.value();
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double gi = e == 0.0 ? g_at_b_[static_cast<std::size_t>(i)] : g_at_offset(e, i);
        total += falling_s_minus_one(sv, n - 1 - i) * gi * std::pow(d - e, sv - n + i);
    }
    return total;
}

double ExtensionSolution::derivative_at_offset(double d, int n) const {
    const double e = touching_ ? 0.5 * d : 0.0;
    const double body = integral_terms(d, e, n) + junction_terms(d, e, n);
    return (n == 0 ? profile_.value(profile_.b()) : 0.0) + s_.inversion_factor() * body;
}

void ExtensionSolution::check_order(int n) const {
    if (n < 0) throw DomainError("derivative order must be non-negative");
    if (n > kMaxDerivativeOrder) {
        throw UnsupportedOrderError("derivative order " + std::to_string(n) + " exceeds the cap of " +
                                    std::to_string(kMaxDerivativeOrder));
    }
}

double ExtensionSolution::derivative_unchecked(double y, int n) const {
    check_order(n);
    const double b = profile_.b();
    if (!(y > b)) throw DomainError("extension derivative: need y > b");
    return derivative_at_offset(y - b, n);
}

double ExtensionSolution::value(double x) const {
    if (x <= profile_.b()) return profile_.value(x);
    return derivative_unchecked(x, 0);
}

double ExtensionSolution::derivative(double y, int n) const {
    check_order(n);
    const double b = profile_.b();
    if (!(y > b)) throw DomainError("extension derivative: need y > b");
    if (y - b < kJunctionExclusion) {
        throw JunctionProximityError("extension derivative: y = " + std::to_string(y) +
                                     " is within " + std::to_string(kJunctionExclusion) +
                                     " of the junction");
    }
    return derivative_unchecked(y, n);
}

double ExtensionSolution::regularized_derivative(double d) const {
    if (!(d >= 0.0)) throw DomainError("regularized derivative: need a non-negative offset");
    const double k = s_.inversion_factor();
    // Below this offset the correction to the limit k g(b) is under rounding.
    const double negligible = std::max(std::pow(1e-17, 1.0 / (1.0 - s_.value())), 1e-100);
    if (d < negligible) return k * g(profile_.b());
    const double lift = std::pow(d, 1.0 - s_.value());
    if (touching_) return lift * derivative_at_offset(d, 1);
    return k * (g_at_b_[0] + lift * integral_terms(d, 0.0, 1));
}

DerivativeSource ExtensionSolution::derivative_source() const {
    DerivativeSource src;
    const double b = profile_.b();
    src.derivative = [this, b](double t) {
        return t <= b ? profile_.derivative(t, 1) : derivative_unchecked(t, 1);
    };
    src.breakpoints.assign(profile_.data().breakpoints().begin(), profile_.data().breakpoints().end());
    src.polynomial_until = b;
    src.junction = Junction{b, s_.value() - 1.0, [this](double t) { return regularized_derivative(t); }};
    return src;
}

ExtensionSolution solve_extension(CausalProfile profile, const FractionalOrder& s,
                                  const QuadratureOptions& options) {
    return ExtensionSolution(std::move(profile), s, options);
}

double extension_derivative(const ExtensionSolution& sol, int n, double y) {
    return sol.derivative(y, n);
}

}  // namespace caputo
