#pragma once

#include <stdexcept>
#include <string>

namespace cholera {

/// Raised when a computation cannot produce a trustworthy number: step
/// exhaustion, non-finite values, a root bracket without a sign change, a
/// diverging Newton iteration, an unstable discretisation.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when inputs violate a documented precondition. `field()` names the
/// offending parameter so front ends can point at it.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace cholera
