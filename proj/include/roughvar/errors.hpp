#pragma once

#include <stdexcept>
#include <string>

namespace roughvar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands disagree on dimension or truncation level.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Malformed input: non-increasing times, negative arguments, off-grid queries.
class InputError : public Error {
public:
    using Error::Error;
};

/// Argument outside the range of a regularity function.
class RangeError : public Error {
public:
    using Error::Error;
};

/// No dissection satisfies the mesh constraint.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Request is well-formed but not supported (e.g. refinement of fBM).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace roughvar
