#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "caputo/errors.hpp"
#include "caputo/special_functions.hpp"

namespace caputo {

enum class SingularEnd { left, right };

/// Mesh on [lo, hi] whose nodes cluster algebraically toward one end:
/// node_i = end -/+ (hi - lo) (i/n)^q measured from that end. q = 1 is uniform.
class GradedMesh {
public:
    GradedMesh(double lo, double hi, int panels, double grade, SingularEnd toward);

    static GradedMesh uniform(double lo, double hi, int panels) {
        return GradedMesh(lo, hi, panels, 1.0, SingularEnd::left);
    }

    std::span<const double> nodes() const noexcept { return nodes_; }
    int panels() const noexcept { return static_cast<int>(nodes_.size()) - 1; }
    double lo() const noexcept { return nodes_.front(); }
    double hi() const noexcept { return nodes_.back(); }
    double grade() const noexcept { return grade_; }
    SingularEnd toward() const noexcept { return toward_; }

private:
    std::vector<double> nodes_;
    double grade_;
    SingularEnd toward_;
};

/// The weight |point - t|^exponent. The point may sit at an interval end or outside it,
/// never strictly inside.
struct AlgebraicWeight {
    double point;
    double exponent;
};

/// Product integration on one panel: f is interpolated at Gauss-Legendre nodes and the
/// weight's moments against the interpolation basis are integrated exactly.
///
/// Moments of sigma^p (rho + sigma)^alpha are closed form when the weight point is within one
/// panel length (rho < 1); farther out the weight is analytic on the panel and its moments are
/// taken with a 16-point Gauss rule.
class ProductRule {
public:
    explicit ProductRule(int nodes = 4);

    int size() const noexcept { return n_; }

    /// Nodes and weights so that int_lo^hi f(t) w(t) dt ~ sum_k weights[k] f(nodes[k]).
    void panel(double lo, double hi, AlgebraicWeight w, std::span<double> nodes,
               std::span<double> weights) const;

    /// Same for the weight (hi + gap - t)^exponent, with the gap given directly.
    void panel_beyond(double lo, double hi, double gap, double exponent, std::span<double> nodes,
                      std::span<double> weights) const;

    template <class F>
    double integrate(F&& f, const GradedMesh& mesh, AlgebraicWeight w) const;

    /// The interpolation degree is size() - 1.
    static const ProductRule& cubic();

private:
    void panel_at_gap(double lo, double hi, double e, bool from_right, double exponent,
                      std::span<double> nodes, std::span<double> weights) const;

    int n_;
    std::vector<double> sigma_;  // nodes in [0,1]
    std::vector<double> vinv_;   // inverse Vandermonde, row-major vinv_[p * n + k]
};

/// Compensated (Neumaier) accumulation with a fixed summation order.
class Accumulator {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Discretization controls. panels and grade drive the cubic product rule (grade <= 0 selects
/// the order's default); gauss_points and ratio drive the Gauss engine used near junctions.
struct QuadratureOptions {
    int panels = 256;
    double grade = 0.0;
    int gauss_points = 10;
    double ratio = 1.0;

    double resolved_grade(const FractionalOrder& s) const {
        return grade > 0.0 ? grade : s.default_grade();
    }
};

/// int_lo^hi f(t) |c - t|^exponent dt where c is the singular end (lo or hi) and
/// exponent lies in (-1, 0). The mesh must span exactly [lo, hi].
template <class F>
double integrate_singular(F&& f, double lo, double hi, double exponent, SingularEnd end,
                          const GradedMesh& mesh);

/// int_tau^x (y - tau)^(s-1) (x - y)^(-s) dy, split at the midpoint so each half has one
/// singular end. Equals pi / sin(pi s) independently of tau and x.
double kernel_identity_check(const FractionalOrder& s, double tau, double x,
                             const QuadratureOptions& options = {});

/// A quadrature rule on [0, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int n);

/// Gauss-Jacobi rule for the weight sigma^alpha on [0, 1], alpha > -1.
GaussRule gauss_jacobi(int n, double alpha);

/// Nodes on [lo, hi] spaced geometrically away from a point lying `gap` beyond the `toward` end:
/// each panel is at most `ratio` times its distance to that point. With gap = 0 the panel at the
/// end has relative width `floor`.
std::vector<double> geometric_nodes(double lo, double hi, SingularEnd toward, double gap,
                                    double ratio = 1.0, double floor = 1e-12);

/// int f(t) |point - t|^alpha dt over the panels of `nodes`, with point outside (lo, hi).
///
/// Panels touching the point use Gauss-Jacobi; the rest use Gauss-Legendre on f times the
/// weight, after splitting any panel that is wider than its distance to the point.
class WeightedGauss {
public:
    WeightedGauss(int points, double alpha);

    template <class F>
    double integrate(F&& f, std::span<const double> nodes, double point) const;

    double alpha() const noexcept { return alpha_; }
    int points() const noexcept { return static_cast<int>(legendre_.nodes.size()); }

private:
    template <class F>
    double panel(F& f, double lo, double hi, double point) const;
    template <class F>
    double legendre_panel(F& f, double lo, double hi, double point) const;

    GaussRule legendre_;
    GaussRule jacobi_;
    double alpha_;
};

// ---------------------------------------------------------------------------------------

template <class F>
double WeightedGauss::legendre_panel(F& f, double lo, double hi, double point) const {
    const double h = hi - lo;
    double sum = 0.0;
    for (std::size_t k = 0; k < legendre_.nodes.size(); ++k) {
        const double t = lo + h * legendre_.nodes[k];
        const double w = alpha_ == 0.0 ? 1.0 : std::pow(std::abs(point - t), alpha_);
        sum += legendre_.weights[k] * w * f(t);
    }
    return h * sum;
}

template <class F>
double WeightedGauss::panel(F& f, double lo, double hi, double point) const {
    const double h = hi - lo;
    if (point == lo || point == hi) {
        if (jacobi_.nodes.empty()) {
            throw DomainError("WeightedGauss: weight exponent is not integrable at a panel end");
        }
        const double scale = std::pow(h, 1.0 + alpha_);
        double sum = 0.0;
        for (std::size_t k = 0; k < jacobi_.nodes.size(); ++k) {
            const double t = point == lo ? lo + h * jacobi_.nodes[k] : hi - h * jacobi_.nodes[k];
            sum += jacobi_.weights[k] * f(t);
        }
        return scale * sum;
    }
    if (point > lo && point < hi) {
        throw DomainError("WeightedGauss: weight point lies strictly inside a panel");
    }
    const double gap = point < lo ? lo - point : point - hi;
    if (gap >= h || alpha_ == 0.0) return legendre_panel(f, lo, hi, point);
    // Split so that each piece is no wider than its distance to the point.
    Accumulator acc;
    double d = gap;
    while (d < gap + h) {
        const double d_next = std::min(2.0 * d, gap + h);
        if (point < lo) {
            acc.add(legendre_panel(f, point + d, point + d_next, point));
        } else {
            acc.add(legendre_panel(f, point - d_next, point - d, point));
        }
        d = d_next;
    }
    return acc.value();
}

template <class F>
double WeightedGauss::integrate(F&& f, std::span<const double> nodes, double point) const {
    Accumulator acc;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (nodes[i + 1] > nodes[i]) acc.add(panel(f, nodes[i], nodes[i + 1], point));
    }
    return acc.value();
}


template <class F>
double ProductRule::integrate(F&& f, const GradedMesh& mesh, AlgebraicWeight w) const {
    const auto nodes = mesh.nodes();
    std::vector<double> t(static_cast<std::size_t>(n_));
    std::vector<double> wt(static_cast<std::size_t>(n_));
    Accumulator acc;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        panel(nodes[i], nodes[i + 1], w, t, wt);
        double sum = 0.0;
        for (int k = 0; k < n_; k += 2) {
            double pair = wt[k] * f(t[k]);
            if (k + 1 < n_) pair += wt[k + 1] * f(t[k + 1]);
            sum += pair;
        }
        acc.add(sum);
    }
    return acc.value();
}

template <class F>
double integrate_singular(F&& f, double lo, double hi, double exponent, SingularEnd end,
                          const GradedMesh& mesh) {
    if (!(lo < hi)) throw DomainError("integrate_singular: need lo < hi");
    if (!(exponent > -1.0 && exponent < 0.0)) {
        throw DomainError("integrate_singular: exponent must lie in (-1, 0)");
    }
    const double tol = 1e-14 * std::max(1.0, std::abs(lo) + std::abs(hi));
    if (std::abs(mesh.lo() - lo) > tol || std::abs(mesh.hi() - hi) > tol) {
        throw DomainError("integrate_singular: mesh does not span [lo, hi]");
    }
    const double point = end == SingularEnd::left ? lo : hi;
    return ProductRule::cubic().integrate(std::forward<F>(f), mesh, {point, exponent});
}

}  // namespace caputo
