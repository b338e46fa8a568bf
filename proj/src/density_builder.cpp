#include "caputo/density_builder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "caputo/errors.hpp"

namespace caputo {

namespace {

constexpr double kDeltaFloor = 1e-8;
constexpr int kMaxJetOrder = 4;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// d^l/dx^l of x^m.
double monomial_derivative(int m, int l, double x) {
    if (l > m) return 0.0;
    return factorial(m) / factorial(m - l) * std::pow(x, m - l);
}

double grid_point(int i, int samples) { return static_cast<double>(i) / (samples - 1); }

}  // namespace

Eigen::MatrixXd jet_matrix(const std::vector<BlowupMember>& members, const std::vector<double>& points,
                           int m) {
    if (members.empty() || points.empty()) throw DomainError("jet_matrix: need members and points");
    if (m < 0) throw DomainError("jet_matrix: order must be non-negative");
    for (double x : points) {
        if (!(x > 0.0)) throw DomainError("jet_matrix: points must be positive");
    }
    Eigen::MatrixXd M(static_cast<Eigen::Index>(members.size() * points.size()), m + 1);
    Eigen::Index row = 0;
    for (const auto& v : members) {
        for (double x : points) {
            for (int l = 0; l <= m; ++l) M(row, l) = v.derivative(x, l);
            ++row;
        }
    }
    return M;
}

JetCombination::JetCombination(std::vector<BlowupMember> members, std::vector<double> coefficients,
                               double p, int m, double residual, double condition)
    : members_(std::move(members)), coefficients_(std::move(coefficients)), p_(p), m_(m), R_(0.0),
      residual_(residual), condition_(condition) {
    if (members_.empty() || members_.size() != coefficients_.size()) {
        throw DomainError("JetCombination: need one coefficient per member");
    }
    for (const auto& v : members_) R_ = std::max(R_, static_cast<double>(v.j()));
}

double JetCombination::value(double x) const { return derivative(x, 0); }

double JetCombination::derivative(double x, int l) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < members_.size(); ++i) sum += coefficients_[i] * members_[i].derivative(x, l);
    return sum;
}

double JetCombination::caputo(double y, const QuadratureOptions& options) const {
    if (y <= -R_) return 0.0;
    const DerivativeSource psi_src = psi().derivative_source();
    const FractionalOrder& s = psi().order();
    double sum = 0.0;
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const double j = members_[i].j();
        sum += coefficients_[i] * caputo_derivative(psi_src, 0.0, s, y / j + 1.0, options);
    }
    return sum;
}

DerivativeSource JetCombination::derivative_source() const {
    std::vector<DerivativeSource> parts;
    for (const auto& v : members_) parts.push_back(v.derivative_source());
    DerivativeSource src;
    for (const auto& part : parts) {
        src.breakpoints.insert(src.breakpoints.end(), part.breakpoints.begin(), part.breakpoints.end());
    }
    std::sort(src.breakpoints.begin(), src.breakpoints.end());
    src.breakpoints.erase(std::unique(src.breakpoints.begin(), src.breakpoints.end()), src.breakpoints.end());
    src.polynomial_until = 0.0;
    const auto coeffs = coefficients_;
    src.derivative = [parts, coeffs](double t) {
        double sum = 0.0;
        for (std::size_t i = 0; i < parts.size(); ++i) sum += coeffs[i] * parts[i].derivative(t);
        return sum;
    };
    src.junction = Junction{0.0, psi().order().value() - 1.0, [parts, coeffs](double d) {
                                double sum = 0.0;
                                for (std::size_t i = 0; i < parts.size(); ++i) {
                                    sum += coeffs[i] * parts[i].junction->regularized(d);
                                }
                                return sum;
                            }};
    return src;
}

JetCombination prescribe_jet(std::shared_ptr<const ExtensionSolution> psi, int m, const JetOptions& options) {
    if (m < 0 || m > kMaxJetOrder) {
        throw DomainError("prescribe_jet: order must be in [0, " + std::to_string(kMaxJetOrder) + "]");
    }
    if (options.j_pool.empty() || options.p_candidates.empty()) {
        throw DomainError("prescribe_jet: empty candidate pool");
    }
    std::vector<BlowupMember> members;
    for (int j : options.j_pool) members.emplace_back(j, psi);

    Eigen::VectorXd target = Eigen::VectorXd::Zero(m + 1);
    target(m) = 1.0;

    std::optional<JetCombination> best;
    double best_next = 0.0;
    double best_residual = HUGE_VAL;
    double best_condition = 0.0;
    for (double p : options.p_candidates) {
        const Eigen::MatrixXd A = jet_matrix(members, {p}, m).transpose();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sigma = svd.singularValues();
        const double cutoff = options.sv_cutoff * sigma(0);
        Eigen::VectorXd ut = svd.matrixU().transpose() * target;
        for (Eigen::Index i = 0; i < sigma.size(); ++i) ut(i) = sigma(i) > cutoff ? ut(i) / sigma(i) : 0.0;
        const Eigen::VectorXd c = svd.matrixV() * ut;
        const double residual = (A * c - target).lpNorm<Eigen::Infinity>();
        const double condition = sigma(sigma.size() - 1) > 0.0 ? sigma(0) / sigma(sigma.size() - 1) : HUGE_VAL;
        if (residual < best_residual) {
            best_residual = residual;
            best_condition = condition;
        }
        if (!(residual <= options.jet_tol)) continue;
        JetCombination candidate(members, std::vector<double>(c.data(), c.data() + c.size()), p, m, residual,
                                 condition);
        // Prefer the point where the next derivative is smallest: it sets the delta needed later.
        const double next = std::abs(candidate.derivative(p, m + 1));
        if (!best || next < best_next) {
            best = std::move(candidate);
            best_next = next;
        }
    }
    if (!best) {
        std::ostringstream msg;
        msg << "prescribe_jet: no candidate point reaches jet tolerance " << options.jet_tol
            << " (best residual " << best_residual << ", condition " << best_condition << ")";
        throw JetInfeasibleError(msg.str(), best_residual, best_condition);
    }
    return *best;
}

JetCombination prescribe_jet(const FractionalOrder& s, const Psi0Profile& profile, int m,
                             const JetOptions& options) {
    return prescribe_jet(build_psi(s, profile), m, options);
}

MonomialApproximation::MonomialApproximation(int m, std::optional<JetCombination> jet, double delta)
    : m_(m), jet_(std::move(jet)), delta_(delta), scale_(factorial(m)) {
    if (m < 0) throw DomainError("MonomialApproximation: negative order");
    if (m > 0 && !jet_) throw DomainError("MonomialApproximation: order >= 1 needs a jet combination");
    if (!(delta > 0.0)) throw DomainError("MonomialApproximation: delta must be positive");
}

double MonomialApproximation::initial_point() const {
    if (m_ == 0) return 0.0;
    return (-jet_->p() - jet_->R()) / delta_;
}

double MonomialApproximation::derivative(double x, int l) const {
    if (m_ == 0) return l == 0 ? 1.0 : 0.0;
    return scale_ * std::pow(delta_, l - m_) * jet_->derivative(delta_ * x + jet_->p(), l);
}

double MonomialApproximation::caputo(double x, const QuadratureOptions& options) const {
    if (m_ == 0) return 0.0;
    const double s = jet_->psi().order().value();
    return scale_ * std::pow(delta_, s - m_) * jet_->caputo(delta_ * x + jet_->p(), options);
}

std::vector<double> MonomialApproximation::errors(int k, int samples) const {
    std::vector<double> out(static_cast<std::size_t>(k + 1), 0.0);
    for (int i = 0; i < samples; ++i) {
        const double x = grid_point(i, samples);
        for (int l = 0; l <= k; ++l) {
            const double e = std::abs(derivative(x, l) - monomial_derivative(m_, l, x));
            out[static_cast<std::size_t>(l)] = std::max(out[static_cast<std::size_t>(l)], e);
        }
    }
    return out;
}

double MonomialApproximation::jet_amplification() const {
    if (m_ == 0) return 0.0;
    return scale_ * jet_->jet_residual() * std::pow(delta_, -m_);
}

MonomialResult approximate_monomial(std::shared_ptr<const ExtensionSolution> psi, int m, int k, double eps,
                                    const JetOptions& options) {
    if (k < 0 || k > 4) throw DomainError("approximate_monomial: k must be in [0, 4]");
    if (!(eps > 0.0)) throw DomainError("approximate_monomial: eps must be positive");
    if (m == 0) {
        MonomialApproximation one(0, std::nullopt, 1.0);
        MonomialResult r{one, std::vector<double>(static_cast<std::size_t>(k + 1), 0.0), 0.0, {{1.0, 0.0}}};
        return r;
    }
    JetCombination jet = prescribe_jet(std::move(psi), m, options);
    std::vector<std::pair<double, double>> sweep;
    for (double delta = 1.0; delta >= kDeltaFloor; delta *= 0.5) {
        MonomialApproximation u(m, jet, delta);
        std::vector<double> errs = u.errors(k);
        double total = 0.0;
        for (double e : errs) total += e;
        sweep.emplace_back(delta, total);
        if (total < eps) return MonomialResult{std::move(u), std::move(errs), total, std::move(sweep)};
    }
    std::ostringstream msg;
    msg << "approximate_monomial: x^" << m << " not within " << eps << " in C^" << k << " for delta >= "
        << kDeltaFloor << " (last error " << sweep.back().second << ", jet residual " << jet.jet_residual()
        << ")";
    throw NumericalFailure(msg.str());
}

MonomialResult approximate_monomial(const FractionalOrder& s, const Psi0Profile& profile, int m, int k,
                                    double eps, const JetOptions& options) {
    return approximate_monomial(build_psi(s, profile), m, k, eps, options);
}

TargetFunction target_polynomial(std::vector<double> coeffs) {
    std::ostringstream name;
    name << "poly(";
    for (std::size_t i = 0; i < coeffs.size(); ++i) name << (i ? "," : "") << coeffs[i];
    name << ")";
    return {name.str(), [coeffs](double x, int l) {
                double sum = 0.0;
                for (int i = static_cast<int>(coeffs.size()) - 1; i >= l; --i) {
                    sum += coeffs[static_cast<std::size_t>(i)] * monomial_derivative(i, l, x);
                }
                return sum;
            }};
}

TargetFunction target_sin() {
    return {"sin", [](double x, int l) {
                switch (l % 4) {
                    case 0: return std::sin(x);
                    case 1: return std::cos(x);
                    case 2: return -std::sin(x);
                    default: return -std::cos(x);
                }
            }};
}

TargetFunction target_exp() {
    return {"exp", [](double x, int) { return std::exp(x); }};
}

std::vector<double> chebyshev_monomials(const std::function<double(double)>& f, int n) {
    if (n < 0) throw DomainError("chebyshev_monomials: negative degree");
    const int count = n + 1;
    std::vector<long double> cheb(static_cast<std::size_t>(count), 0.0L);
    for (int i = 0; i < count; ++i) {
        const long double theta = std::numbers::pi_v<long double> * (i + 0.5L) / count;
        const double fx = f(static_cast<double>((1.0L + std::cos(theta)) / 2.0L));
        for (int k = 0; k < count; ++k) cheb[static_cast<std::size_t>(k)] += fx * std::cos(k * theta);
    }
    for (int k = 0; k < count; ++k) cheb[static_cast<std::size_t>(k)] *= (k == 0 ? 1.0L : 2.0L) / count;

    // T_k(2x - 1) in the monomial basis of x.
    std::vector<long double> prev(static_cast<std::size_t>(count), 0.0L);
    std::vector<long double> cur(static_cast<std::size_t>(count), 0.0L);
    std::vector<long double> out(static_cast<std::size_t>(count), 0.0L);
    prev[0] = 1.0L;
    out[0] += cheb[0];
    if (count > 1) {
        cur[0] = -1.0L;
        cur[1] = 2.0L;
        for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] += cheb[1] * cur[static_cast<std::size_t>(i)];
    }
    for (int k = 2; k < count; ++k) {
        std::vector<long double> next(static_cast<std::size_t>(count), 0.0L);
        for (int i = 0; i < count; ++i) {
            const long double c = cur[static_cast<std::size_t>(i)];
            next[static_cast<std::size_t>(i)] += -2.0L * c - prev[static_cast<std::size_t>(i)];
            if (i + 1 < count) next[static_cast<std::size_t>(i + 1)] += 4.0L * c;
        }
        for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] += cheb[static_cast<std::size_t>(k)] * next[static_cast<std::size_t>(i)];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return std::vector<double>(out.begin(), out.end());
}

double polynomial_ck_error(const std::vector<double>& coeffs, const TargetFunction& f, int k, int samples,
                           std::vector<double>* per_order) {
    const TargetFunction p = target_polynomial(coeffs);
    std::vector<double> sup(static_cast<std::size_t>(k + 1), 0.0);
    for (int i = 0; i < samples; ++i) {
        const double x = grid_point(i, samples);
        for (int l = 0; l <= k; ++l) {
            sup[static_cast<std::size_t>(l)] =
                std::max(sup[static_cast<std::size_t>(l)], std::abs(p.eval(x, l) - f.eval(x, l)));
        }
    }
    if (per_order) *per_order = sup;
    double total = 0.0;
    for (double e : sup) total += e;
    return total;
}

double Approximant::derivative(double x, int l) const {
    double sum = 0.0;
    for (const auto& piece : pieces_) sum += piece.coefficient * piece.result.approx.derivative(x, l);
    return sum;
}

double Approximant::caputo(double x, const QuadratureOptions& options) const {
    double sum = 0.0;
    for (const auto& piece : pieces_) sum += piece.coefficient * piece.result.approx.caputo(x, options);
    return sum;
}

ApproximationResult approximate_function(const TargetFunction& f, int k, double eps,
                                         std::shared_ptr<const ExtensionSolution> psi,
                                         const ApproximationOptions& options) {
    if (k < 0 || k > 4) throw DomainError("approximate_function: k must be in [0, 4]");
    if (!(eps > 0.0)) throw DomainError("approximate_function: eps must be positive");
    if (options.grid < 2 || options.residual_points < 1) {
        throw DomainError("approximate_function: grid sizes must be positive");
    }
    ApproximationReport report;
    report.target = f.name;
    report.k = k;
    report.eps_requested = eps;

    // Stone-Weierstrass stage.
    std::vector<double> coeffs;
    double poly_error = HUGE_VAL;
    int degree = 0;
    for (; degree <= options.max_degree; ++degree) {
        coeffs = chebyshev_monomials([&](double x) { return f.eval(x, 0); }, degree);
        poly_error = polynomial_ck_error(coeffs, f, k, options.grid);
        if (poly_error < eps / 2.0) break;
    }
    if (degree > options.max_degree) {
        std::ostringstream msg;
        msg << "approximate_function: polynomial degree above " << options.max_degree
            << " needed for C^" << k << " error " << eps / 2.0 << " (degree " << options.max_degree
            << " reaches " << poly_error << "); try a larger eps";
        throw NumericalFailure(msg.str());
    }
    double largest = 0.0;
    for (double c : coeffs) largest = std::max(largest, std::abs(c));
    std::vector<double> pruned = coeffs;
    for (double& c : pruned) {
        if (std::abs(c) <= options.coefficient_floor * largest) c = 0.0;
    }
    const double pruned_error = polynomial_ck_error(pruned, f, k, options.grid);
    if (pruned_error < eps / 2.0) {
        coeffs = pruned;
        poly_error = pruned_error;
    }
    report.degree = degree;
    report.coefficients = coeffs;
    report.polynomial_error = poly_error;

    // Monomial stage.
    std::vector<ApproximationPiece> pieces;
    const double n_terms = static_cast<double>(degree + 1);
    report.error_bound = poly_error;
    for (int m = 0; m <= degree; ++m) {
        const double c = coeffs[static_cast<std::size_t>(m)];
        if (c == 0.0) continue;
        const double budget = eps / (2.0 * std::abs(c) * n_terms);
        MonomialResult r = approximate_monomial(psi, m, k, budget, options.jet);
        report.error_bound += std::abs(c) * r.error;
        pieces.push_back({m, c, budget, std::move(r)});
    }
    Approximant u(std::move(pieces));

    report.initial_point = 0.0;
    bool any = false;
    for (const auto& piece : u.pieces()) {
        if (piece.m == 0) continue;
        const double a = piece.result.approx.initial_point();
        report.initial_point = any ? std::min(report.initial_point, a) : a;
        any = true;
    }

    std::vector<double> sup(static_cast<std::size_t>(k + 1), 0.0);
    for (int i = 0; i < options.grid; ++i) {
        const double x = grid_point(i, options.grid);
        for (int l = 0; l <= k; ++l) {
            sup[static_cast<std::size_t>(l)] =
                std::max(sup[static_cast<std::size_t>(l)], std::abs(u.derivative(x, l) - f.eval(x, l)));
        }
    }
    report.per_derivative = sup;
    report.eps_achieved = 0.0;
    for (double e : sup) report.eps_achieved += e;

    std::vector<double> grid;
    for (int i = 0; i < options.residual_points; ++i) {
        grid.push_back(options.residual_points == 1 ? 0.0 : grid_point(i, options.residual_points));
    }
    report.residual.x = grid;
    for (double x : grid) {
        const double v = u.caputo(x, options.quadrature);
        report.residual.value.push_back(v);
        report.residual.max_abs = std::max(report.residual.max_abs, std::abs(v));
    }
    return ApproximationResult{std::move(report), std::move(u)};
}

ApproximationResult approximate_function(const TargetFunction& f, int k, double eps,
                                         const FractionalOrder& s, const Psi0Profile& profile,
                                         const ApproximationOptions& options) {
    return approximate_function(f, k, eps, build_psi(s, profile, options.quadrature), options);
}

}  // namespace caputo
