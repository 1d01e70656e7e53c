#pragma once

#include <stdexcept>
#include <string>

namespace swarmsafe {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration value violates its invariant. The message names the field.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation (z <= 0, NaN input, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// sigma and pairwise distance disagree; update_sigma must run before psi.
class InconsistentStateError : public Error {
public:
    using Error::Error;
};

/// Two agents share a position, so a pair direction is undefined.
class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

/// Query outside the spatial/temporal extent of a gridded field.
class OutOfDomainError : public Error {
public:
    using Error::Error;
};

/// Value grid has no finite guidance at the queried position.
class NoGuidanceError : public Error {
public:
    using Error::Error;
};

/// Mission sampling exhausted its rejection budget.
class SamplingError : public Error {
public:
    using Error::Error;
};

} // namespace swarmsafe
