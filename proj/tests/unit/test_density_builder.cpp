#include <doctest.h>

#include <cmath>

#include "caputo/density_builder.hpp"
#include "caputo/errors.hpp"
#include "../support/oracles.hpp"

using namespace caputo;

namespace {

const std::shared_ptr<const ExtensionSolution>& psi_half() {
    static const auto psi = build_psi(FractionalOrder(0.5), Psi0Profile::quadratic());
    return psi;
}

}  // namespace

TEST_CASE("jet matrix layout") {
    const std::vector<BlowupMember> members{BlowupMember(2, psi_half()), BlowupMember(8, psi_half())};
    const auto M = jet_matrix(members, {1.0, 2.0}, 3);
    CHECK(M.rows() == 4);
    CHECK(M.cols() == 4);
    CHECK(M(1, 0) == doctest::Approx(eval_vj(members[0], 2.0)));
    CHECK(M(2, 2) == doctest::Approx(members[1].derivative(1.0, 2)));
    // Scaling: v_j^(l)(x) = j^(s-l) psi^(l)(x/j + 1).
    CHECK(M(3, 1) == doctest::Approx(std::pow(8.0, -0.5) * psi_half()->derivative(1.25, 1)).epsilon(1e-13));
}

TEST_CASE("prescribed jets") {
    for (int m = 0; m <= 4; ++m) {
        const auto jet = prescribe_jet(psi_half(), m);
        CHECK(jet.jet_residual() <= 1e-8);
        CHECK(jet.condition_number() < 1e12);
        CHECK(jet.R() == 32.0);
        CHECK(jet.initial_point() == -32.0);
        for (int l = 0; l <= m; ++l) {
            CHECK(std::abs(jet.derivative(jet.p(), l) - (l == m ? 1.0 : 0.0)) < 1e-8);
        }
        const auto v = [&](double x) { return jet.value(x); };
        const auto dv = [&](double x) { return jet.derivative(x, 1); };
        const double h = jet.p() / 20.0;
        for (int l = 1; l <= m; ++l) {
            const double fd = l <= 3 ? oracle::central_difference(v, jet.p(), l, h)
                                     : oracle::central_difference(dv, jet.p(), l - 1, h);
            CHECK(std::abs(fd - (l == m ? 1.0 : 0.0)) < 1e-6);
        }
    }
    CHECK_THROWS_AS(prescribe_jet(psi_half(), 5), DomainError);
    CHECK_THROWS_AS(prescribe_jet(psi_half(), -1), DomainError);
}

TEST_CASE("infeasible jets are reported") {
    JetOptions few;
    few.j_pool = {2, 4};
    try {
        (void)prescribe_jet(psi_half(), 3, few);
        FAIL("expected JetInfeasibleError");
    } catch (const JetInfeasibleError& e) {
        CHECK(e.residual() > few.jet_tol);
    }
}

TEST_CASE("jet combination is stationary") {
    const auto jet = prescribe_jet(psi_half(), 2);
    const auto src = jet.derivative_source();
    const FractionalOrder s(0.5);
    for (double y : {0.5, 2.0}) {
        const double direct = caputo_derivative(src, jet.initial_point(), s, y);
        CHECK(std::abs(direct - jet.caputo(y)) < 1e-9);
        CHECK(std::abs(jet.caputo(y)) < 1e-8);
    }
}

TEST_CASE("monomial approximation") {
    const auto r = approximate_monomial(psi_half(), 1, 0, 1e-2);
    CHECK(r.error < 1e-2);
    CHECK(r.approx.delta() <= 1.0);
    CHECK(r.approx.initial_point() < -30.0);
    CHECK(r.sweep.back().first == r.approx.delta());
    CHECK(r.sweep.back().second == r.error);
    for (std::size_t i = 0; i + 1 < r.sweep.size(); ++i) CHECK(r.sweep[i].second >= 1e-2);
    CHECK(std::abs(r.approx.caputo(0.5)) < 1e-8);
    const auto c = approximate_monomial(psi_half(), 0, 3, 1e-6);
    CHECK(c.error == 0.0);
    CHECK(c.approx.value(0.3) == 1.0);
    CHECK_THROWS_AS(approximate_monomial(psi_half(), 1, 0, -1.0), DomainError);
}

TEST_CASE("chebyshev monomials reproduce polynomials") {
    const auto c = chebyshev_monomials([](double x) { return 1.0 - 2.0 * x + 0.5 * x * x * x; }, 4);
    REQUIRE(c.size() == 5);
    CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(c[1] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(std::abs(c[2]) < 1e-11);
    CHECK(c[3] == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(std::abs(c[4]) < 1e-11);
    std::vector<double> per;
    const double err = polynomial_ck_error({0.0, 0.0, 1.0}, target_polynomial({0.0, 0.0, 1.0}), 2, 100, &per);
    CHECK(err == 0.0);
    CHECK(per.size() == 3);
}

TEST_CASE("function approximation") {
    const auto res = approximate_function(target_polynomial({0.0, 0.0, 1.0}), 0, 1e-2, psi_half());
    const auto& rep = res.report;
    CHECK(rep.eps_achieved < 1e-2);
    CHECK(rep.eps_achieved <= rep.error_bound + 1e-15);
    CHECK(rep.error_bound < 1e-2);
    CHECK(rep.residual.max_abs <= 1e-4);
    CHECK(rep.degree == 2);
    double budget = 0.0;
    for (const auto& p : res.approximant.pieces()) {
        budget += std::abs(p.coefficient) * p.budget;
        CHECK(p.result.error < p.budget);
    }
    CHECK(budget <= 0.5e-2 + 1e-15);
    CHECK(res.approximant.value(0.5) == doctest::Approx(0.25).epsilon(0.05));
    CHECK_THROWS_AS(approximate_function(target_sin(), -1, 1e-2, psi_half()), DomainError);
    CHECK_THROWS_AS(approximate_function(target_sin(), 0, 0.0, psi_half()), DomainError);
}
