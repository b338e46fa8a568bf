#include <doctest.h>

#include <cmath>
#include <numbers>

#include "caputo/errors.hpp"
#include "caputo/quadrature.hpp"
#include "caputo/special_functions.hpp"
#include "../support/oracles.hpp"

using namespace caputo;

TEST_CASE("graded mesh invariants") {
    const GradedMesh m(2.0, 5.0, 16, 3.0, SingularEnd::right);
    const auto n = m.nodes();
    CHECK(n.front() == 2.0);
    CHECK(n.back() == 5.0);
    for (std::size_t i = 1; i < n.size(); ++i) CHECK(n[i] > n[i - 1]);
    // Spacing shrinks toward the right end.
    CHECK(n[n.size() - 1] - n[n.size() - 2] < n[1] - n[0]);
    CHECK(n[n.size() - 1] - n[n.size() - 2] == doctest::Approx(3.0 * std::pow(1.0 / 16.0, 3.0)));
    const auto uniform = GradedMesh::uniform(0.0, 1.0, 4);
    const auto u = uniform.nodes();
    CHECK(u[1] == doctest::Approx(0.25));
    CHECK_THROWS_AS(GradedMesh(1.0, 1.0, 4, 2.0, SingularEnd::left), DomainError);
    CHECK_THROWS_AS(GradedMesh(0.0, 1.0, 4, 0.5, SingularEnd::left), DomainError);
    CHECK_THROWS_AS(GradedMesh(0.0, 1.0, 0, 2.0, SingularEnd::left), DomainError);
}

TEST_CASE("strong grading keeps nodes distinct") {
    const GradedMesh m(2.0, 2.5, 256, 8.0, SingularEnd::left);
    const auto n = m.nodes();
    for (std::size_t i = 1; i < n.size(); ++i) CHECK(n[i] > n[i - 1]);
}

TEST_CASE("integrate_singular basic cases") {
    for (double s : {0.25, 0.5, 0.75}) {
        const GradedMesh mesh(0.0, 1.0, 8, 2.0, SingularEnd::right);
        const double v = integrate_singular([](double) { return 1.0; }, 0.0, 1.0, -s, SingularEnd::right, mesh);
        CHECK(v == doctest::Approx(1.0 / (1.0 - s)).epsilon(1e-13));
        for (double x : {0.5, 2.0, 7.0}) {
            const GradedMesh mx(0.0, x, 4, 2.0, SingularEnd::right);
            const double w = integrate_singular([](double t) { return t; }, 0.0, x, -s, SingularEnd::right, mx);
            const double ref = std::pow(x, 2.0 - s) * caputo::gamma(2.0) * caputo::gamma(1.0 - s) / caputo::gamma(3.0 - s);
            CHECK(std::abs(w / ref - 1.0) < 1e-12);
            const double brute = oracle::tanh_sinh(
                [&](double t, double, double dr) { return t * std::pow(dr, -s); }, 0.0, x);
            CHECK(std::abs(w / brute - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("product rule is exact for cubics") {
    const double s = 0.37;
    const auto f = [](double t) { return 2.0 - t + 3.0 * t * t - 0.5 * t * t * t; };
    // Moments of the weight (1 - t)^(-s) on [0, 1]: int t^k (1-t)^-s = B(k+1, 1-s).
    const double ref = 2.0 * beta(1, 1 - s) - beta(2, 1 - s) + 3.0 * beta(3, 1 - s) - 0.5 * beta(4, 1 - s);
    for (int panels : {1, 3, 17}) {
        const GradedMesh mesh(0.0, 1.0, panels, 2.5, SingularEnd::right);
        CHECK(std::abs(integrate_singular(f, 0.0, 1.0, -s, SingularEnd::right, mesh) / ref - 1.0) < 1e-12);
    }
    // Weight point outside the interval, near and far.
    for (double gap : {1e-3, 0.3, 5.0}) {
        const double x = 1.0 + gap;
        const double brute = oracle::tanh_sinh(
            [&](double t, double, double) { return f(t) * std::pow(x - t, -s); }, 0.0, 1.0);
        const double v = ProductRule::cubic().integrate(f, GradedMesh::uniform(0.0, 1.0, 2), {x, -s});
        CHECK(std::abs(v / brute - 1.0) < 1e-11);
    }
}

TEST_CASE("integrate_singular domain errors") {
    const GradedMesh mesh(0.0, 1.0, 4, 2.0, SingularEnd::right);
    const auto one = [](double) { return 1.0; };
    CHECK_THROWS_AS(integrate_singular(one, 1.0, 0.0, -0.5, SingularEnd::right, mesh), DomainError);
    CHECK_THROWS_AS(integrate_singular(one, 0.0, 1.0, -1.0, SingularEnd::right, mesh), DomainError);
    CHECK_THROWS_AS(integrate_singular(one, 0.0, 1.0, 0.2, SingularEnd::right, mesh), DomainError);
    CHECK_THROWS_AS(integrate_singular(one, 0.0, 2.0, -0.5, SingularEnd::right, mesh), DomainError);
}

TEST_CASE("mesh refinement converges with order at least two") {
    const double s = 0.5;
    const double x = 1.0;
    // f = exp(t) is C^4; reference from the tanh-sinh oracle.
    const double ref = oracle::tanh_sinh(
        [&](double t, double, double dr) { return std::exp(t) * std::pow(dr, -s); }, 0.0, x);
    double previous = 0.0;
    for (int panels : {2, 4, 8, 16}) {
        const GradedMesh mesh(0.0, x, panels, 2.0, SingularEnd::right);
        const double err = std::abs(
            integrate_singular([](double t) { return std::exp(t); }, 0.0, x, -s, SingularEnd::right, mesh) - ref);
        if (panels > 2 && previous > 1e-13) CHECK(err <= 0.25 * previous);
        previous = err;
    }
}

TEST_CASE("kernel identity") {
    for (double s : {0.25, 0.5, 0.75}) {
        const double refl = std::numbers::pi / std::sin(std::numbers::pi * s);
        for (auto [tau, x] : {std::pair{0.0, 1.0}, std::pair{2.0, 7.0}, std::pair{-1.0, 0.0}}) {
            const double v = kernel_identity_check(FractionalOrder(s), tau, x);
            CHECK(std::abs(v - refl) <= 1e-8 * refl);
        }
        const double base = kernel_identity_check(FractionalOrder(s), 0.3, 1.9);
        CHECK(std::abs(kernel_identity_check(FractionalOrder(s), 0.3 + 4.1, 1.9 + 4.1) / base - 1.0) < 1e-8);
        CHECK(std::abs(kernel_identity_check(FractionalOrder(s), 0.3 * 6.5, 1.9 * 6.5) / base - 1.0) < 1e-8);
    }
    CHECK_THROWS_AS(kernel_identity_check(FractionalOrder(0.5), 1.0, 1.0), DomainError);
}

TEST_CASE("gauss rules integrate their polynomial spaces") {
    for (int n : {1, 4, 10, 16}) {
        const GaussRule gl = gauss_legendre(n);
        for (int p = 0; p < 2 * n; ++p) {
            double sum = 0.0;
            for (int k = 0; k < n; ++k) sum += gl.weights[k] * std::pow(gl.nodes[k], p);
            CHECK(sum == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
        }
        for (double alpha : {-0.75, -0.5, -0.1}) {
            const GaussRule gj = gauss_jacobi(n, alpha);
            for (int p = 0; p < 2 * n; ++p) {
                double sum = 0.0;
                for (int k = 0; k < n; ++k) sum += gj.weights[k] * std::pow(gj.nodes[k], p);
                CHECK(sum == doctest::Approx(1.0 / (p + alpha + 1.0)).epsilon(1e-13));
            }
        }
    }
    CHECK_THROWS_AS(gauss_jacobi(4, -1.0), DomainError);
}

TEST_CASE("geometric nodes") {
    const auto n = geometric_nodes(1.0, 5.0, SingularEnd::left, 0.25, 1.0);
    CHECK(n.front() == 1.0);
    CHECK(n.back() == 5.0);
    for (std::size_t i = 1; i + 1 < n.size(); ++i) {
        CHECK(n[i] > n[i - 1]);
        CHECK(n[i + 1] - n[i] <= 1.3 * (n[i] - 0.75));
    }
    const auto z = geometric_nodes(0.0, 1.0, SingularEnd::right, 0.0, 1.0, 1e-6);
    CHECK(z.back() == 1.0);
    CHECK(1.0 - z[z.size() - 2] == doctest::Approx(1e-6));
}

TEST_CASE("weighted gauss handles touching and nearby weight points") {
    const double alpha = -0.5;
    const WeightedGauss rule(10, alpha);
    const std::vector<double> nodes{0.0, 0.5, 1.0};
    const auto f = [](double t) { return std::cos(t); };
    // Weight point at the right end.
    const double touching = oracle::tanh_sinh(
        [&](double t, double, double dr) { return f(t) * std::pow(dr, alpha); }, 0.0, 1.0);
    CHECK(std::abs(rule.integrate(f, nodes, 1.0) / touching - 1.0) < 1e-13);
    // Weight point just outside: the panel is split toward it.
    for (double gap : {1e-9, 1e-4, 0.2}) {
        const double p = -gap;
        const double ref = oracle::tanh_sinh(
            [&](double t, double dl, double) { return f(t) * std::pow(gap + dl, alpha); }, 0.0, 1.0);
        CHECK(std::abs(rule.integrate(f, nodes, p) / ref - 1.0) < 1e-11);
    }
    CHECK_THROWS_AS(rule.integrate(f, nodes, 0.5 + 1e-3), DomainError);
}
