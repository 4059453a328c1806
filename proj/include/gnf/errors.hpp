#pragma once

#include <stdexcept>
#include <string>

namespace gnf {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dimension or degree mismatch between operands.
struct ShapeError : Error {
    using Error::Error;
};

/// Input outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// Invalid parameter combination (beta < alpha, lambda >= L, ...).
struct ParamError : Error {
    using Error::Error;
};

/// Inputs not defined to sufficient truncation order.
struct TruncationError : Error {
    using Error::Error;
};

/// Series reciprocal requested for a non-unit.
struct NotAUnitError : Error {
    using Error::Error;
};

/// Too few data points for a requested fit.
struct InsufficientDataError : Error {
    using Error::Error;
};

/// Linearization aborted on a resonant projection; carries the offending part.
struct NotLinearizableError : Error {
    unsigned degree;              // coefficient degree of the resonant part
    std::string resonant_part;    // human-readable monomial list
    NotLinearizableError(unsigned deg, std::string part, const std::string& msg)
        : Error(msg), degree(deg), resonant_part(std::move(part)) {}
};

/// Missing configuration (e.g. decay constants required for a tail bound).
struct ConfigError : Error {
    using Error::Error;
};

/// Integrand failed to decay: data is not flat for the requested solve.
struct DivergenceError : Error {
    using Error::Error;
};

/// Fundamental matrix too ill-conditioned to invert reliably.
struct IllConditionedError : Error {
    using Error::Error;
};

}  // namespace gnf
