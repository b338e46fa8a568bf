#include "caputo/blowup.hpp"

#include <cmath>
#include <string>

#include "caputo/errors.hpp"
#include "caputo/special_functions.hpp"

namespace caputo {

namespace {

constexpr int kSample = 1000;
constexpr double kProfileTol = 1e-12;

// Least-squares line y = c0 + c1 x.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    return {my - slope * mx, slope};
}

}  // namespace

Psi0Profile::Psi0Profile(PiecewisePoly data) : data_(std::move(data)) {
    if (std::abs(data_.lo()) > kProfileTol || std::abs(data_.hi() - 1.0) > kProfileTol) {
        throw DomainError("Psi0Profile: data must live on [0, 1]");
    }
    const auto bps = data_.breakpoints();
    for (std::size_t i = 1; i + 1 < bps.size(); ++i) {
        const double left = data_.piece_derivative(i - 1, bps[i] - bps[i - 1], 1);
        const double right = data_.piece_derivative(i, 0.0, 1);
        if (std::abs(left - right) > 1e-10 * std::max(1.0, std::abs(left))) {
            throw DomainError("Psi0Profile: derivative jumps at " + std::to_string(bps[i]) +
                              "; psi_0 must be C^1");
        }
    }
    for (int i = 0; i <= kSample; ++i) {
        const double x = static_cast<double>(i) / kSample;
        if (x >= 0.75) {
            if (std::abs(data_.value(x)) > kProfileTol) {
                throw DomainError("Psi0Profile: psi_0 must vanish on [3/4, 1], fails at " +
                                  std::to_string(x));
            }
        } else if (!(data_.derivative(x, 1) < 0.0)) {
            throw DomainError("Psi0Profile: psi_0' must be negative on [0, 3/4), fails at " +
                              std::to_string(x));
        }
    }
}

Psi0Profile Psi0Profile::quadratic() {
    return Psi0Profile(PiecewisePoly({0.0, 0.75, 1.0},
                                     {{1.0, -8.0 / 3.0, 16.0 / 9.0, 0.0}, {0.0, 0.0, 0.0, 0.0}}));
}

std::shared_ptr<const ExtensionSolution> build_psi(const FractionalOrder& s, const Psi0Profile& profile,
                                                   const QuadratureOptions& options) {
    return std::make_shared<const ExtensionSolution>(profile.causal(), s, options);
}

BlowupMember::BlowupMember(int j, std::shared_ptr<const ExtensionSolution> psi)
    : j_(j), psi_(std::move(psi)) {
    if (j < 1) throw DomainError("BlowupMember: j must be a positive integer");
    if (!psi_) throw DomainError("BlowupMember: missing psi");
}

double BlowupMember::value(double x) const {
    return std::pow(static_cast<double>(j_), psi_->order().value()) * psi_->value(x / j_ + 1.0);
}

double BlowupMember::derivative(double x, int l) const {
    if (l == 0) return value(x);
    const double factor = std::pow(static_cast<double>(j_), psi_->order().value() - l);
    const double y = x / j_ + 1.0;
    if (x <= 0.0) return factor * psi_->profile().derivative(y, l);
    return factor * psi_->derivative(y, l);
}

DerivativeSource BlowupMember::derivative_source() const {
    DerivativeSource src;
    const double j = j_;
    const double lift = std::pow(j, psi_->order().value() - 1.0);
    auto psi = psi_;
    src.derivative = [psi, j, lift](double t) {
        const double y = t / j + 1.0;
        if (t <= 0.0) return lift * psi->profile().derivative(y, 1);
        return lift * psi->derivative_unchecked(y, 1);
    };
    for (double bp : psi_->profile().data().breakpoints()) src.breakpoints.push_back(j * (bp - 1.0));
    src.polynomial_until = 0.0;
    // v_j'(d) d^(1-s) = j^(s-1) psi'(1 + d/j) (j (d/j))^(1-s) = regularized psi at d/j.
    src.junction = Junction{0.0, psi_->order().value() - 1.0,
                            [psi, j](double d) { return psi->regularized_derivative(d / j); }};
    return src;
}

double eval_vj(const BlowupMember& member, double x) { return member.value(x); }

const char* to_string(KappaMatch m) {
    switch (m) {
        case KappaMatch::none: return "none";
        case KappaMatch::candidate_a: return "candidate_a";
        case KappaMatch::candidate_b: return "candidate_b";
        case KappaMatch::both: return "both";
    }
    return "none";
}

std::vector<double> default_eps_grid() {
    std::vector<double> grid;
    for (int e = 5; e <= 14; ++e) grid.push_back(std::ldexp(1.0, -e));
    return grid;
}

KappaEstimate estimate_kappa(const FractionalOrder& s, const Psi0Profile& profile,
                             const std::vector<double>& eps_grid, const QuadratureOptions& options,
                             int expansion_terms) {
    return estimate_kappa(*build_psi(s, profile, options), eps_grid, expansion_terms);
}

KappaEstimate estimate_kappa(const ExtensionSolution& psi, const std::vector<double>& eps_grid,
                             int expansion_terms) {
    if (eps_grid.size() < 4) throw DomainError("estimate_kappa: need at least 4 eps values");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0 && eps_grid[i] <= 0.5)) {
            throw DomainError("estimate_kappa: eps values must lie in (0, 0.5]");
        }
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) {
            throw DomainError("estimate_kappa: eps grid must be decreasing");
        }
    }
    if (eps_grid.front() < 10.0 * eps_grid.back()) {
        throw DomainError("estimate_kappa: eps grid must span at least a decade");
    }
    if (expansion_terms < 1 || expansion_terms > ExtensionSolution::kMaxDerivativeOrder + 1) {
        throw DomainError("estimate_kappa: expansion_terms out of range");
    }
    const double sv = psi.order().value();
    KappaEstimate est;
    est.eps = eps_grid;
    std::vector<double> log_eps;
    std::vector<double> log_psi;
    for (double e : eps_grid) {
        const double v = psi.value(1.0 + e);
        est.scaled.push_back(v * std::pow(e, -sv));
        log_eps.push_back(std::log(e));
        log_psi.push_back(std::log(v));
    }
    const auto [kappa, slope] = fit_line(eps_grid, est.scaled);
    est.kappa = kappa;
    est.slope = slope;
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        est.fit_residual = std::max(est.fit_residual, std::abs(est.scaled[i] - kappa - slope * eps_grid[i]));
    }
    est.fit_exponent = fit_line(log_eps, log_psi).second;

    est.g_at_one = psi.g(1.0);
    est.candidate_a = beta(1.0, sv) * est.g_at_one;
    est.candidate_b = psi.order().inversion_factor() * est.candidate_a;
    double factorial = 1.0;
    for (int i = 0; i < expansion_terms; ++i) {
        if (i > 0) factorial *= i;
        est.expansion.push_back(beta(i + 1.0, sv) * psi.g_derivative(1.0, i) / factorial);
    }
    const bool near_a = std::abs(kappa - est.candidate_a) <= 0.01 * std::abs(est.candidate_a);
    const bool near_b = std::abs(kappa - est.candidate_b) <= 0.01 * std::abs(est.candidate_b);
    est.match = near_a && near_b ? KappaMatch::both
              : near_a           ? KappaMatch::candidate_a
              : near_b           ? KappaMatch::candidate_b
                                 : KappaMatch::none;
    return est;
}

std::vector<int> default_j_list() { return {2, 4, 8, 16, 32, 64}; }

BlowupConvergence check_blowup_convergence(const FractionalOrder& s, const Psi0Profile& profile,
                                           const std::vector<int>& j_list, double lo, double hi,
                                           const QuadratureOptions& options, int samples) {
    return check_blowup_convergence(build_psi(s, profile, options), j_list, lo, hi, samples);
}

BlowupConvergence check_blowup_convergence(std::shared_ptr<const ExtensionSolution> psi,
                                           const std::vector<int>& j_list, double lo, double hi,
                                           int samples) {
    if (!(lo > 0.0 && lo < hi)) throw DomainError("check_blowup_convergence: need 0 < lo < hi");
    if (j_list.size() < 2) throw DomainError("check_blowup_convergence: need at least two j values");
    for (std::size_t i = 1; i < j_list.size(); ++i) {
        if (!(j_list[i] > j_list[i - 1])) throw DomainError("check_blowup_convergence: j list must increase");
    }
    if (samples < 2) throw DomainError("check_blowup_convergence: need at least two samples");
    BlowupConvergence out;
    out.kappa = estimate_kappa(*psi);
    const double sv = psi->order().value();
    std::vector<double> log_j;
    std::vector<double> log_err;
    for (int j : j_list) {
        const BlowupMember v(j, psi);
        double sup = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double x = lo + (hi - lo) * i / (samples - 1);
            sup = std::max(sup, std::abs(v.value(x) - out.kappa.kappa * std::pow(x, sv)));
        }
        out.rows.push_back({j, sup});
        log_j.push_back(std::log(static_cast<double>(j)));
        log_err.push_back(std::log(sup));
    }
    out.rate = fit_line(log_j, log_err).second;
    out.monotone = true;
    for (std::size_t i = 1; i < out.rows.size(); ++i) {
        if (!(out.rows[i].sup_error < out.rows[i - 1].sup_error)) out.monotone = false;
    }
    return out;
}

}  // namespace caputo
