#pragma once

#include <stdexcept>
#include <string>

namespace wald {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A payoff matrix with a weakly dominant alternative, or other invalid payoffs.
struct InvalidPayoffs : Error {
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// Iterative solver failed to reach its residual target.
struct ConvergenceFailure : Error {
    using Error::Error;
};

/// No interior maximum detected inside the supplied bracket.
struct BracketError : Error {
    using Error::Error;
};

/// Effort cost has no interior tangency point (c(0) <= 0).
struct NoInteriorOptimum : Error {
    using Error::Error;
};

/// Finite-difference result changed too much under step halving.
struct NumericalInstability : Error {
    using Error::Error;
};

/// A baseline choice share is 0 or 1; complexity ranking is undefined there.
struct DegenerateShare : Error {
    using Error::Error;
};

/// Observed share outside [0, 1].
struct InvalidShare : Error {
    using Error::Error;
};

/// Simulation request exceeds the configured resource cap.
struct ResourceError : Error {
    using Error::Error;
};

/// Bad user-facing configuration (CLI / config file).
struct ValidationError : Error {
    using Error::Error;
};

} // namespace wald
