#pragma once

#include <stdexcept>
#include <string>

namespace stabex {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter regime does not support the requested method or representation.
struct RegimeError : Error {
    using Error::Error;
};

// Quantity diverges for the given parameters (e.g. undamped exchange with alpha <= 1).
struct DivergenceError : RegimeError {
    using RegimeError::RegimeError;
};

// Argument outside the analyticity domain, or a log branch crossing.
struct DomainError : Error {
    using Error::Error;
};

// A point lies on or on the wrong side of an integration contour.
struct ContourError : DomainError {
    using DomainError::DomainError;
};

// Requested accuracy not reached.
struct ToleranceError : Error {
    using Error::Error;
};

} // namespace stabex
