#include "caputo/caputo_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "caputo/errors.hpp"

namespace caputo {

namespace {

constexpr double kJunctionFloor = 1e-12;

bool close(double x, double y) {
    return std::abs(x - y) <= 1e-12 * std::max(1.0, std::max(std::abs(x), std::abs(y)));
}

}  // namespace

CausalProfile::CausalProfile(PiecewisePoly data, double a, double b)
    : data_(std::move(data)), a_(a), b_(b) {
    if (!(a < b)) throw DomainError("CausalProfile: need a < b");
    if (!close(data_.lo(), a) || !close(data_.hi(), b)) {
        throw DomainError("CausalProfile: data must be supported on [a, b] = [" + std::to_string(a) +
                          ", " + std::to_string(b) + "]");
    }
}

CausalProfile::CausalProfile(PiecewisePoly data)
    : CausalProfile(data, data.lo(), data.hi()) {}

DerivativeSource CausalProfile::derivative_source() const {
    DerivativeSource src;
    src.derivative = [data = data_, b = b_](double t) {
        if (t > b) throw DomainError("CausalProfile: derivative requested right of b");
        return data.derivative(t, 1);
    };
    src.breakpoints.assign(data_.breakpoints().begin(), data_.breakpoints().end());
    src.polynomial_until = b_;
    return src;
}

double caputo_derivative(const DerivativeSource& u, double a, const FractionalOrder& s, double x,
                         const QuadratureOptions& options) {
    if (x <= a) return 0.0;
    const double sv = s.value();
    const auto& du = u.derivative;

    std::vector<double> cuts{a};
    for (double bp : u.breakpoints) {
        if (bp > a && bp < x) cuts.push_back(bp);
    }
    if (u.junction && u.junction->point > a && u.junction->point < x) cuts.push_back(u.junction->point);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(x);

    const WeightedGauss kernel(options.gauss_points, -sv);
    std::optional<WeightedGauss> junction_rule;
    if (u.junction) junction_rule.emplace(options.gauss_points, u.junction->exponent);
    const auto with_kernel = [&](double t) { return du(t); };

    Accumulator acc;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double l = cuts[i];
        const double r = cuts[i + 1];
        if (u.junction && l == u.junction->point) {
            // In the offset d = t - J: left half carries the junction weight, right half the kernel.
            const Junction& jn = *u.junction;
            const double width = r - l;
            const double half = 0.5 * width;
            const auto left = geometric_nodes(0.0, half, SingularEnd::left, 0.0, options.ratio, kJunctionFloor);
            if (r == x) {
                acc.add(junction_rule->integrate(
                    [&](double d) { return jn.regularized(d) * std::pow(width - d, -sv); }, left, 0.0));
                const auto right = geometric_nodes(half, width, SingularEnd::left, half, options.ratio);
                acc.add(kernel.integrate(
                    [&](double d) { return jn.regularized(d) * std::pow(d, jn.exponent); }, right, width));
            } else {
                const double reach = x - l;
                acc.add(junction_rule->integrate(
                    [&](double d) { return jn.regularized(d) * std::pow(reach - d, -sv); }, left, 0.0));
                const auto right = geometric_nodes(l + half, r, SingularEnd::left, half, options.ratio);
                acc.add(kernel.integrate(with_kernel, right, x));
            }
        } else if (r <= u.polynomial_until) {
            const GradedMesh mesh = r == x ? GradedMesh(l, r, 1, 1.0, SingularEnd::right)
                                           : GradedMesh::uniform(l, r, 1);
            acc.add(ProductRule::cubic().integrate(with_kernel, mesh, {x, -sv}));
        } else {
            const double mid = l + 0.5 * (r - l);
            const auto left = geometric_nodes(l, mid, SingularEnd::left, 0.0, options.ratio, kJunctionFloor);
            const auto right = geometric_nodes(mid, r, SingularEnd::left, mid - l, options.ratio);
            acc.add(kernel.integrate(with_kernel, left, x));
            acc.add(kernel.integrate(with_kernel, right, x));
        }
    }
    return acc.value() / gamma(1.0 - sv);
}

ResidualTable caputo_residual(const DerivativeSource& u, double a, const FractionalOrder& s,
                              const std::vector<double>& grid, const QuadratureOptions& options) {
    if (grid.empty()) throw DomainError("caputo_residual: empty grid");
    ResidualTable table;
    table.x = grid;
    table.value.reserve(grid.size());
    for (double x : grid) {
        if (!(x > a)) {
            throw DomainError("caputo_residual: grid point " + std::to_string(x) +
                              " is not right of the initial point");
        }
        const double v = caputo_derivative(u, a, s, x, options);
        table.value.push_back(v);
        table.max_abs = std::max(table.max_abs, std::abs(v));
    }
    return table;
}

}  // namespace caputo
