#pragma once

#include <stdexcept>
#include <string>

namespace fdwlan {

/// A precondition on user-supplied parameters was violated.
class InvalidParameter : public std::invalid_argument {
public:
    explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

/// A fixed-point solver exhausted its iteration budget.
class ConvergenceFailure : public std::runtime_error {
public:
    ConvergenceFailure(const std::string& what, double residual, int iterations)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + " after " +
                             std::to_string(iterations) + " iterations)"),
          residual(residual),
          iterations(iterations) {}

    double residual;
    int iterations;
};

/// The model produced values outside its own admissible range
/// (non-positive normalization denominator, negative stationary mass, ...).
class ModelInconsistency : public std::runtime_error {
public:
    explicit ModelInconsistency(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem-level failure while emitting results.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fdwlan
