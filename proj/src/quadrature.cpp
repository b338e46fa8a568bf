#include "caputo/quadrature.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

namespace caputo {

namespace {

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
        long double dp = 0.0L;
        for (int iter = 0; iter < 100; ++iter) {
            long double p0 = 1.0L;
            long double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0L);
            const long double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-19L) break;
        }
        const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
        nodes[static_cast<std::size_t>(i)] = static_cast<double>((x + 1.0L) / 2.0L);
        weights[static_cast<std::size_t>(i)] = static_cast<double>(w / 2.0L);
    }
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < n; ++i) pairs.emplace_back(nodes[i], weights[i]);
    std::sort(pairs.begin(), pairs.end());
    for (int i = 0; i < n; ++i) {
        nodes[i] = pairs[i].first;
        weights[i] = pairs[i].second;
    }
}

struct FarRule {
    std::vector<double> x;
    std::vector<double> w;
};

const FarRule& far_rule() {
    static const FarRule rule = [] {
        FarRule r;
        gauss_legendre_unit(16, r.x, r.w);
        return r;
    }();
    return rule;
}

// (r2^beta - r1^beta) / beta without cancellation for small beta.
double power_difference(double r1, double r2, double beta) {
    if (r1 == 0.0) return std::pow(r2, beta) / beta;
    return std::pow(r1, beta) * std::expm1(beta * std::log(r2 / r1)) / beta;
}

// J_p = int_0^1 sigma^p (rho + sigma)^alpha d sigma for p = 0..n-1.
void unit_moments(double rho, double alpha, int n, std::span<double> out) {
    if (rho == 0.0) {
        if (!(alpha > -1.0)) {
            throw DomainError("product rule: weight exponent " + std::to_string(alpha) +
                              " is not integrable at the panel end");
        }
        for (int p = 0; p < n; ++p) out[p] = 1.0 / (p + alpha + 1.0);
        return;
    }
    if (rho < 1.0) {
        // Integration by parts: (alpha + 1 + p) J_p = (rho + 1)^(alpha + 1) - p rho J_{p-1}.
        const double top = std::pow(rho + 1.0, alpha + 1.0);
        out[0] = power_difference(rho, rho + 1.0, alpha + 1.0);
        for (int p = 1; p < n; ++p) {
            out[p] = (top - p * rho * out[p - 1]) / (alpha + 1.0 + p);
        }
        return;
    }
    const FarRule& far = far_rule();
    for (int p = 0; p < n; ++p) out[p] = 0.0;
    for (std::size_t q = 0; q < far.x.size(); ++q) {
        const double sigma = far.x[q];
        double term = far.w[q] * std::pow(rho + sigma, alpha);
        for (int p = 0; p < n; ++p) {
            out[p] += term;
            term *= sigma;
        }
    }
}

}  // namespace

GradedMesh::GradedMesh(double lo, double hi, int panels, double grade, SingularEnd toward)
    : grade_(grade), toward_(toward) {
    if (!(lo < hi)) throw DomainError("GradedMesh: need lo < hi");
    if (panels < 1) throw DomainError("GradedMesh: need at least one panel");
    if (!(grade >= 1.0)) throw DomainError("GradedMesh: grade must be >= 1");
    const double length = hi - lo;
    nodes_.resize(static_cast<std::size_t>(panels) + 1);
    for (int i = 0; i <= panels; ++i) {
        const double frac = std::pow(static_cast<double>(i) / panels, grade);
        if (toward == SingularEnd::left) {
            nodes_[static_cast<std::size_t>(i)] = lo + length * frac;
        } else {
            nodes_[static_cast<std::size_t>(panels - i)] = hi - length * frac;
        }
    }
    nodes_.front() = lo;
    nodes_.back() = hi;
    // Strong grading can collapse the first nodes onto the end in double precision.
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
}

ProductRule::ProductRule(int nodes) : n_(nodes) {
    if (nodes < 1 || nodes > 12) throw DomainError("ProductRule: node count must be in [1, 12]");
    std::vector<double> unused;
    gauss_legendre_unit(nodes, sigma_, unused);

    // Invert the Vandermonde matrix V[i][p] = sigma_i^p in long double.
    const int n = nodes;
    std::vector<long double> a(static_cast<std::size_t>(n * 2 * n), 0.0L);
    auto at = [&](int r, int c) -> long double& { return a[static_cast<std::size_t>(r * 2 * n + c)]; };
    for (int i = 0; i < n; ++i) {
        long double power = 1.0L;
        for (int p = 0; p < n; ++p) {
            at(i, p) = power;
            power *= sigma_[i];
        }
        at(i, n + i) = 1.0L;
    }
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(at(r, col)) > std::abs(at(pivot, col))) pivot = r;
        }
        for (int c = 0; c < 2 * n; ++c) std::swap(at(col, c), at(pivot, c));
        const long double d = at(col, col);
        for (int c = 0; c < 2 * n; ++c) at(col, c) /= d;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const long double factor = at(r, col);
            for (int c = 0; c < 2 * n; ++c) at(r, c) -= factor * at(col, c);
        }
    }
    // V^{-1}[p][k]: coefficient of sigma^p in the k-th Lagrange basis polynomial.
    vinv_.resize(static_cast<std::size_t>(n * n));
    for (int p = 0; p < n; ++p) {
        for (int k = 0; k < n; ++k) {
            vinv_[static_cast<std::size_t>(p * n + k)] = static_cast<double>(at(p, n + k));
        }
    }
}

const ProductRule& ProductRule::cubic() {
    static const ProductRule rule(4);
    return rule;
}

void ProductRule::panel(double lo, double hi, AlgebraicWeight w, std::span<double> nodes,
                        std::span<double> weights) const {
    double e = 0.0;
    bool from_right = false;
    if (w.point >= hi) {
        e = w.point - hi;
        from_right = true;
    } else if (w.point <= lo) {
        e = lo - w.point;
    } else {
        throw DomainError("product rule: weight point lies strictly inside the panel");
    }
    panel_at_gap(lo, hi, e, from_right, w.exponent, nodes, weights);
}

void ProductRule::panel_beyond(double lo, double hi, double gap, double exponent, std::span<double> nodes,
                               std::span<double> weights) const {
    if (!(gap >= 0.0)) throw DomainError("product rule: gap must be non-negative");
    panel_at_gap(lo, hi, gap, true, exponent, nodes, weights);
}

void ProductRule::panel_at_gap(double lo, double hi, double e, bool from_right, double exponent,
                               std::span<double> nodes, std::span<double> weights) const {
    const double h = hi - lo;
    std::array<double, 12> moments{};
    unit_moments(e / h, exponent, n_, std::span<double>(moments.data(), static_cast<std::size_t>(n_)));
    const double scale = std::pow(h, 1.0 + exponent);
    for (int k = 0; k < n_; ++k) {
        double sum = 0.0;
        for (int p = 0; p < n_; ++p) sum += vinv_[static_cast<std::size_t>(p * n_ + k)] * moments[p];
        weights[k] = scale * sum;
        nodes[k] = from_right ? hi - h * sigma_[k] : lo + h * sigma_[k];
    }
}

GaussRule gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: need at least one node");
    GaussRule rule;
    gauss_legendre_unit(n, rule.nodes, rule.weights);
    return rule;
}

GaussRule gauss_jacobi(int n, double alpha) {
    if (n < 1) throw DomainError("gauss_jacobi: need at least one node");
    if (!(alpha > -1.0)) throw DomainError("gauss_jacobi: exponent must exceed -1");
    // Golub-Welsch for P^(0, alpha) on [-1, 1], i.e. weight (1 + x)^alpha, then x -> (1 + x) / 2.
    const double b = alpha;
    Eigen::VectorXd diag(n);
    Eigen::VectorXd off(std::max(n - 1, 1));
    for (int k = 0; k < n; ++k) {
        const double c = 2.0 * k + b;
        diag(k) = k == 0 ? b / (b + 2.0) : (b * b) / (c * (c + 2.0));
        if (k >= 1) {
            const double kk = k;
            off(k - 1) = std::sqrt(4.0 * kk * kk * (kk + b) * (kk + b) /
                                   (c * c * (c + 1.0) * (c - 1.0)));
        }
    }
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    if (n == 1) {
        rule.nodes[0] = (1.0 + diag(0)) / 2.0;
        rule.weights[0] = 1.0 / (alpha + 1.0);
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, off.head(n - 1), Eigen::ComputeEigenvectors);
    if (eig.info() != Eigen::Success) throw NumericalFailure("gauss_jacobi: eigensolver failed");
    for (int k = 0; k < n; ++k) {
        const double v0 = eig.eigenvectors()(0, k);
        rule.nodes[static_cast<std::size_t>(k)] = (1.0 + eig.eigenvalues()(k)) / 2.0;
        rule.weights[static_cast<std::size_t>(k)] = v0 * v0 / (alpha + 1.0);
    }
    return rule;
}

std::vector<double> geometric_nodes(double lo, double hi, SingularEnd toward, double gap,
                                    double ratio, double floor) {
    if (!(lo < hi)) throw DomainError("geometric_nodes: need lo < hi");
    if (!(gap >= 0.0) || !(ratio > 0.0) || !(floor > 0.0 && floor < 1.0)) {
        throw DomainError("geometric_nodes: need gap >= 0, ratio > 0 and floor in (0, 1)");
    }
    const double length = hi - lo;
    // Distances from the end, measured inward.
    std::vector<double> d{0.0};
    double first = gap > 0.0 ? ratio * gap : floor * length;
    double pos = std::min(first, length);
    while (pos < length) {
        d.push_back(pos);
        pos = pos + ratio * (pos + gap);
    }
    // Avoid a sliver at the far end.
    if (d.size() > 1 && length - d.back() < 0.25 * (d.back() - d[d.size() - 2])) d.pop_back();
    d.push_back(length);
    std::vector<double> nodes(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (toward == SingularEnd::left) {
            nodes[i] = lo + d[i];
        } else {
            nodes[d.size() - 1 - i] = hi - d[i];
        }
    }
    nodes.front() = lo;
    nodes.back() = hi;
    return nodes;
}

WeightedGauss::WeightedGauss(int points, double alpha)
    : legendre_(gauss_legendre(points)), alpha_(alpha) {
    if (alpha > -1.0) jacobi_ = gauss_jacobi(points, alpha);
}

double kernel_identity_check(const FractionalOrder& s, double tau, double x,
                             const QuadratureOptions& options) {
    if (!(tau < x)) throw DomainError("kernel_identity_check: need tau < x");
    const double sv = s.value();
    const double mid = tau + 0.5 * (x - tau);
    const double grade = options.resolved_grade(s);
    const GradedMesh left(tau, mid, options.panels, grade, SingularEnd::left);
    const GradedMesh right(mid, x, options.panels, grade, SingularEnd::right);
    const double lower = integrate_singular([&](double y) { return std::pow(x - y, -sv); }, tau, mid,
                                            sv - 1.0, SingularEnd::left, left);
    const double upper = integrate_singular([&](double y) { return std::pow(y - tau, sv - 1.0); },
                                            mid, x, -sv, SingularEnd::right, right);
    return lower + upper;
}

}  // namespace caputo
