#pragma once

#include <stdexcept>
#include <string>

namespace snslab {

/// Base class for every error raised by the laboratory.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad arguments or configuration (exit code 2 in the CLI).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A noise path does not cover the requested time window.
class PathCoverageError : public Error {
public:
    using Error::Error;
};

/// Non-finite state or blow-up guard tripped (exit code 3).
class NumericalAbort : public Error {
public:
    using Error::Error;
};

/// An attractor approximation failed to stabilize (exit code 4).
class Unconverged : public Error {
public:
    using Error::Error;
};

}  // namespace snslab
