#pragma once

#include <stdexcept>
#include <string>

namespace caputo {

/// Raised when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Derivatives of an extension are not evaluated too close to the data junction,
/// where the (y-b)^(s-n+i) terms blow up.
class JunctionProximityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Derivative order above the supported cap.
class UnsupportedOrderError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A numerical target (tolerance, budget) could not be reached.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class JetInfeasibleError : public NumericalFailure {
public:
    JetInfeasibleError(const std::string& what, double residual, double condition)
        : NumericalFailure(what), residual_(residual), condition_(condition) {}

    double residual() const noexcept { return residual_; }
    double condition_number() const noexcept { return condition_; }

private:
    double residual_;
    double condition_;
};

}  // namespace caputo
