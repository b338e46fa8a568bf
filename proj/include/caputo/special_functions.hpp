#pragma once

#include <numbers>

namespace caputo {

/// Order s of the fractional derivative, restricted to the open interval (0,1).
class FractionalOrder {
public:
    explicit FractionalOrder(double s);

    double value() const noexcept { return s_; }

    /// pi / sin(pi s), the value of the Abel kernel integral.
    double reflection() const;

    /// sin(pi s) / pi, the normalisation of the inversion formula.
    double inversion_factor() const;

    /// Default grading exponent max(2, 2/(1-s)) for meshes near an algebraic endpoint.
    double default_grade() const;

    friend bool operator==(const FractionalOrder&, const FractionalOrder&) = default;

private:
    double s_;
};

/// Gamma(z) for z > 0 (Lanczos, g = 7, nine terms; relative error ~1e-15).
double gamma(double z);

/// log Gamma(z) for z > 0.
double log_gamma(double z);

/// Beta(x, y) = Gamma(x) Gamma(y) / Gamma(x + y) for x, y > 0.
double beta(double x, double y);

/// Falling product (-s)(-s-1)...(-s-n+1); 1 for n = 0.
double falling_neg_s(double s, int n);

/// Falling product (s-1)(s-2)...(s-count); 1 for count = 0.
double falling_s_minus_one(double s, int count);

}  // namespace caputo
