#ifndef CSITLAB_ERRORS_HPP
#define CSITLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace csitlab {

// Base for all library errors so callers can catch csitlab issues in one net.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// Mismatched alphabet sizes or vector lengths.
struct ShapeError : Error {
    using Error::Error;
};

struct EmptyError : Error {
    using Error::Error;
};

// Two energies compared exactly equal; with continuous noise this signals
// sample reuse rather than bad luck, so it is an error, not a coin flip.
struct TieError : Error {
    using Error::Error;
};

// Scheme parameters give a nonpositive operating point.
struct InfeasibleError : Error {
    using Error::Error;
};

// An exhaustive enumeration would exceed its configured budget.
struct CapExceededError : Error {
    using Error::Error;
};

struct ZeroCostError : Error {
    using Error::Error;
};

struct ThetaInfeasibleError : Error {
    using Error::Error;
};

struct NoConvergenceError : Error {
    using Error::Error;
};

// Bad CLI/config input; message carries the offending field.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace csitlab

#endif
