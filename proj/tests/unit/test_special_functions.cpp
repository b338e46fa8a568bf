#include <doctest.h>

#include <cmath>
#include <numbers>

#include "caputo/errors.hpp"
#include "caputo/special_functions.hpp"
#include "../support/oracles.hpp"

using namespace caputo;

TEST_CASE("fractional order bounds") {
    CHECK_THROWS_AS(FractionalOrder(0.0), DomainError);
    CHECK_THROWS_AS(FractionalOrder(1.0), DomainError);
    CHECK_THROWS_AS(FractionalOrder(-0.3), DomainError);
    CHECK_THROWS_AS(FractionalOrder(std::nan("")), DomainError);
    const FractionalOrder s(0.25);
    CHECK(s.value() == 0.25);
    CHECK(s.reflection() == doctest::Approx(std::numbers::pi * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(s.inversion_factor() * s.reflection() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(FractionalOrder(0.5).default_grade() == 4.0);
    CHECK(FractionalOrder(0.1).default_grade() == 2.0 / 0.9);
    CHECK(FractionalOrder(0.01).default_grade() == 2.0 / 0.99);
}

TEST_CASE("gamma at exact values") {
    CHECK(caputo::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(caputo::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(caputo::gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK_THROWS_AS(caputo::gamma(0.0), DomainError);
    CHECK_THROWS_AS(caputo::gamma(-1.5), DomainError);
}

TEST_CASE("gamma matches the Stirling oracle") {
    for (double z = 0.05; z < 30.0; z += 0.173) {
        CHECK(std::abs(caputo::gamma(z) / oracle::gamma(z) - 1.0) < 1e-13);
    }
}

TEST_CASE("gamma recurrence") {
    for (double z = 0.1; z < 10.0; z += 0.037) {
        CHECK(std::abs(caputo::gamma(z + 1.0) - z * caputo::gamma(z)) <= 1e-12 * caputo::gamma(z + 1.0));
    }
}

TEST_CASE("log gamma agrees with gamma") {
    for (double z : {0.3, 1.7, 12.5, 80.0, 150.0}) {
        CHECK(log_gamma(z) == doctest::Approx(std::log(caputo::gamma(z))).epsilon(1e-13));
    }
    CHECK(std::isfinite(log_gamma(500.0)));
}

TEST_CASE("beta values and identities") {
    CHECK(beta(1.0, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(beta(0.5, 0.5) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    CHECK(beta(2.0, 3.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    CHECK_THROWS_AS(beta(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(beta(1.0, -2.0), DomainError);
    for (double s = 0.05; s < 0.951; s += 0.01) {
        const double refl = std::numbers::pi / std::sin(std::numbers::pi * s);
        CHECK(std::abs(beta(s, 1.0 - s) - refl) <= 1e-10 * refl);
    }
    for (double x : {0.2, 1.3, 4.0}) {
        for (double y : {0.7, 2.5, 9.0}) {
            CHECK(std::abs(beta(x, y) - beta(y, x)) <= 1e-12 * beta(x, y));
        }
    }
    CHECK(beta(100.0, 80.0) == doctest::Approx(std::exp(log_gamma(100.0) + log_gamma(80.0) - log_gamma(180.0))).epsilon(1e-12));
}

TEST_CASE("coefficient products") {
    CHECK(falling_neg_s(0.5, 0) == 1.0);
    CHECK(falling_neg_s(0.5, 3) == doctest::Approx(-0.5 * -1.5 * -2.5));
    CHECK(falling_s_minus_one(0.5, 0) == 1.0);
    CHECK(falling_s_minus_one(0.5, 2) == doctest::Approx(-0.5 * -1.5));
}
