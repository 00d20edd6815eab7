/// @file errors.hpp
/// @brief Exception hierarchy shared by all modules.

#pragma once

#include <stdexcept>
#include <string>

namespace rflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input lies outside the mathematical domain of the operation (zero divisor, singular map).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Caller violated a documented precondition (coefficient condition, parameter binding).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A closed form or constraint is not admissible at the requested point (arcsin argument,
/// tangent pole, quadrature boundary).
class AdmissibilityError : public Error {
public:
    using Error::Error;
};

/// Grid is malformed or too small for the requested stencil.
class GridError : public Error {
public:
    using Error::Error;
};

/// Scenario configuration is invalid. `key()` names the offending dotted key.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key + ": " + what), key_(std::move(key)) {}

    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace rflow
