#pragma once

#include <stdexcept>
#include <string>

namespace pointwave {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (r <= 0, t <= 0, non-finite values, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Initial data that does not satisfy the point-interaction compatibility condition.
class CompatibilityError : public Error {
public:
    using Error::Error;
};

/// Nonlinearity configuration that cannot be used (non-confining potential, empty sublevel set).
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// Numerical procedure that failed to converge or left its admissible region.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace pointwave
