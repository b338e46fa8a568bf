#include "caputo/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "caputo/errors.hpp"

namespace caputo {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

void require_positive(double z, const char* fn) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw DomainError(std::string(fn) + ": argument must be a positive finite real, got " +
                          std::to_string(z));
    }
}

// Lanczos sum and shifted argument for z >= 0.5.
struct LanczosParts {
    double series;
    double t;
    double zm1;
};

LanczosParts lanczos(double z) {
    const double zm1 = z - 1.0;
    double series = kLanczosCoeffs[0];
    for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
        series += kLanczosCoeffs[i] / (zm1 + static_cast<double>(i));
    }
    return {series, zm1 + kLanczosG + 0.5, zm1};
}

double gamma_unchecked(double z) {
    if (z < 0.5) {
        return std::numbers::pi / (std::sin(std::numbers::pi * z) * gamma_unchecked(1.0 - z));
    }
    const auto [series, t, zm1] = lanczos(z);
    const double half_power = std::pow(t, 0.5 * (zm1 + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half_power * (half_power * std::exp(-t)) * series;
}

double log_gamma_unchecked(double z) {
    if (z < 0.5) {
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * z)) -
               log_gamma_unchecked(1.0 - z);
    }
    const auto [series, t, zm1] = lanczos(z);
    return 0.5 * std::log(2.0 * std::numbers::pi) + (zm1 + 0.5) * std::log(t) - t +
           std::log(series);
}

}  // namespace

FractionalOrder::FractionalOrder(double s) : s_(s) {
    if (!(s > 0.0 && s < 1.0)) {
        throw DomainError("fractional order must satisfy 0 < s < 1, got " + std::to_string(s));
    }
}

double FractionalOrder::reflection() const {
    return std::numbers::pi / std::sin(std::numbers::pi * s_);
}

double FractionalOrder::inversion_factor() const {
    return std::sin(std::numbers::pi * s_) / std::numbers::pi;
}

double FractionalOrder::default_grade() const {
    return std::max(2.0, 2.0 / (1.0 - s_));
}

double gamma(double z) {
    require_positive(z, "gamma");
    if (z > 171.6) return HUGE_VAL;
    return gamma_unchecked(z);
}

double log_gamma(double z) {
    require_positive(z, "log_gamma");
    return log_gamma_unchecked(z);
}

double beta(double x, double y) {
    require_positive(x, "beta");
    require_positive(y, "beta");
    if (x + y < 150.0) {
        return gamma_unchecked(x) * gamma_unchecked(y) / gamma_unchecked(x + y);
    }
    return std::exp(log_gamma_unchecked(x) + log_gamma_unchecked(y) - log_gamma_unchecked(x + y));
}

double falling_neg_s(double s, int n) {
    double product = 1.0;
    for (int k = 0; k < n; ++k) product *= (-s - k);
    return product;
}

double falling_s_minus_one(double s, int count) {
    double product = 1.0;
    for (int k = 1; k <= count; ++k) product *= (s - k);
    return product;
}

}  // namespace caputo
