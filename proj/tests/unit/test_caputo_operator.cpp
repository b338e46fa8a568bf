#include <doctest.h>

#include <cmath>

#include "caputo/caputo_operator.hpp"
#include "caputo/errors.hpp"
#include "../support/oracles.hpp"

using namespace caputo;

namespace {

CausalProfile linear_profile() {
    return CausalProfile(PiecewisePoly({0.0, 10.0}, {{0.0, 1.0, 0.0, 0.0}}), 0.0, 10.0);
}

DerivativeSource smooth_source(std::function<double(double)> du) {
    DerivativeSource src;
    src.derivative = std::move(du);
    return src;
}

}  // namespace

TEST_CASE("caputo derivative of a constant vanishes") {
    const CausalProfile c(PiecewisePoly({0.0, 5.0}, {{3.0, 0.0, 0.0, 0.0}}), 0.0, 5.0);
    for (double x : {0.5, 2.0, 5.0}) CHECK(caputo_derivative(c.derivative_source(), 0.0, FractionalOrder(0.4), x) == 0.0);
}

TEST_CASE("caputo derivative of a linear function") {
    const auto src = linear_profile().derivative_source();
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        for (double x : {0.1, 0.5, 1.0, 2.0, 7.5}) {
            const double ref = std::pow(x, 1.0 - s) / oracle::gamma(2.0 - s);
            CHECK(std::abs(caputo_derivative(src, 0.0, FractionalOrder(s), x) - ref) <= 1e-12 * std::max(1.0, ref));
        }
    }
}

TEST_CASE("caputo derivative of a cubic") {
    // u = t^3 on [0, 4]: D^s u = 6 x^(3-s) / Gamma(4-s).
    const CausalProfile p(PiecewisePoly::from_global({0.0, 4.0}, {{0.0, 0.0, 0.0, 1.0}}), 0.0, 4.0);
    const double s = 0.3;
    for (double x : {0.7, 3.9}) {
        const double ref = 6.0 * std::pow(x, 3.0 - s) / oracle::gamma(4.0 - s);
        CHECK(caputo_derivative(p.derivative_source(), 0.0, FractionalOrder(s), x) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("caputo derivative of a smooth non-polynomial function") {
    const double s = 0.6;
    const auto src = smooth_source([](double t) { return std::cos(t); });
    for (double x : {0.3, 1.0, 3.0}) {
        const double ref = oracle::tanh_sinh(
            [&](double t, double, double dr) { return std::cos(t) * std::pow(dr, -s); }, 0.0, x) / oracle::gamma(1.0 - s);
        CHECK(caputo_derivative(src, 0.0, FractionalOrder(s), x) == doctest::Approx(ref).epsilon(1e-11));
    }
}

TEST_CASE("caputo derivative is causal") {
    const auto src = linear_profile().derivative_source();
    CHECK(caputo_derivative(src, 0.0, FractionalOrder(0.5), 0.0) == 0.0);
    CHECK(caputo_derivative(src, 0.0, FractionalOrder(0.5), -3.0) == 0.0);
    // Changing u' right of x does not change D^s u(x).
    const auto left = smooth_source([](double t) { return t < 1.0 ? 1.0 : 100.0 * t; });
    DerivativeSource cut = left;
    cut.breakpoints = {1.0};
    CHECK(caputo_derivative(cut, 0.0, FractionalOrder(0.5), 0.9) ==
          doctest::Approx(caputo_derivative(src, 0.0, FractionalOrder(0.5), 0.9)).epsilon(1e-13));
}

TEST_CASE("caputo derivative is linear") {
    const double s = 0.45;
    const auto f = [](double t) { return std::exp(-t); };
    const auto g = [](double t) { return t * t; };
    const auto sf = smooth_source(f);
    const auto sg = smooth_source(g);
    const auto sum = smooth_source([&](double t) { return 2.0 * f(t) - 3.5 * g(t); });
    for (double x : {0.4, 2.2}) {
        const double lhs = caputo_derivative(sum, 0.0, FractionalOrder(s), x);
        const double rhs = 2.0 * caputo_derivative(sf, 0.0, FractionalOrder(s), x) -
                           3.5 * caputo_derivative(sg, 0.0, FractionalOrder(s), x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("junction terms are integrated in the offset variable") {
    // u'(t) = (t - 1)^(-1/2) on t > 1: D^s u(x) with a = 1 has the closed form
    // Gamma(1/2) (x-1)^(1/2 - s) / Gamma(3/2 - s).
    const double s = 0.5;
    DerivativeSource src;
    src.derivative = [](double t) { return t > 1.0 ? 1.0 / std::sqrt(t - 1.0) : 0.0; };
    src.breakpoints = {1.0};
    src.junction = Junction{1.0, -0.5, [](double) { return 1.0; }};
    for (double x : {1.0 + 1e-9, 1.5, 4.0}) {
        const double ref = oracle::gamma(0.5) * std::pow(x - 1.0, 0.5 - s) / oracle::gamma(1.5 - s);
        CHECK(caputo_derivative(src, 0.0, FractionalOrder(s), x) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("caputo residual table") {
    const auto src = linear_profile().derivative_source();
    const FractionalOrder s(0.5);
    const auto table = caputo_residual(src, 0.0, s, {0.5, 1.0, 2.0});
    REQUIRE(table.value.size() == 3);
    CHECK(table.max_abs == doctest::Approx(std::sqrt(2.0) / oracle::gamma(1.5)).epsilon(1e-12));
    CHECK_THROWS_AS(caputo_residual(src, 0.0, s, {}), DomainError);
    CHECK_THROWS_AS(caputo_residual(src, 0.0, s, {1.0, -1.0}), DomainError);
}

TEST_CASE("causal profile validation") {
    const PiecewisePoly p({0.0, 1.0}, {{0.0, 1.0, 0.0, 0.0}});
    CHECK_THROWS_AS(CausalProfile(p, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(CausalProfile(p, 0.0, 2.0), DomainError);
    const CausalProfile c(p);
    CHECK(c.a() == 0.0);
    CHECK(c.b() == 1.0);
}
