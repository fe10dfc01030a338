#pragma once

#include <stdexcept>
#include <string>

namespace gapguide {

/// Base of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input values outside their admissible range.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Grid too coarse for the requested geometry.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Geometry that cannot be handled (non-simply-connected, out of grid, ...).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Iterative solver failed to converge; carries the last residual.
class IterationError : public Error {
public:
    IterationError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    [[nodiscard]] double residual() const { return residual_; }

private:
    double residual_;
};

/// A discrete identity the operators must satisfy was violated.
class StructuralError : public Error {
public:
    StructuralError(const std::string& what, double violation)
        : Error(what + " (max violation " + std::to_string(violation) + ")"), violation_(violation) {}
    [[nodiscard]] double violation() const { return violation_; }

private:
    double violation_;
};

/// Invalid run configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace gapguide
