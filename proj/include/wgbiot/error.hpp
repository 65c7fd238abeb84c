#pragma once

#include <stdexcept>
#include <string>

namespace wgbiot {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument to a public operation (bad level, dt <= 0, nu >= 1/2, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Degenerate, self-intersecting or otherwise unusable polygon.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Gram matrix that cannot be factored to working precision.
class ConditioningError : public Error {
public:
    using Error::Error;
};

/// Failure evaluating scenario data (non-finite source, missing field).
class ScenarioError : public Error {
public:
    using Error::Error;
};

/// Operation requires data the scenario does not provide.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Factorization failed or the residual check rejected the solution.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// Malformed run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Broken internal invariant (dimension mismatch between cooperating modules).
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace wgbiot
