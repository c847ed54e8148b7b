#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mildeig {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two grid objects with different lattice parameters were combined.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A semigroup was evaluated at t < 0.
class NegativeTime : public Error {
public:
    using Error::Error;
};

/// A vector left the positive cone by more than the violation tolerance.
class ConeViolation : public Error {
public:
    using Error::Error;
};

/// An argument exceeded the radius-rho domain of f or B.
class DomainExceeded : public Error {
public:
    using Error::Error;
};

/// The fixed-point map produced an iterate with vanishing norm.
class NoMass : public Error {
public:
    using Error::Error;
};

/// The two quadrature routes disagree beyond the requested tolerance.
class QuadratureMismatch : public Error {
public:
    using Error::Error;
};

/// Expression text could not be parsed; `position` is a byte offset into the source.
class ExprSyntaxError : public Error {
public:
    ExprSyntaxError(const std::string& what, std::size_t position)
        : Error(what), position(position) {}
    std::size_t position;
};

/// An identifier is not an allowed variable in this context.
class UnknownVariable : public Error {
public:
    using Error::Error;
};

/// An identifier used as a function is not in the function catalog.
class UnknownFunction : public Error {
public:
    using Error::Error;
};

/// Division by zero, sqrt of a negative, or a non-finite intermediate.
class EvalError : public Error {
public:
    using Error::Error;
};

/// Structural config problem: missing/unknown/badly-typed fields.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Config parsed but is semantically invalid (bad sensor point, negative weight, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace mildeig
