#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wshrink {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File missing, unreadable, or unwritable.
class IoError : public Error {
public:
    using Error::Error;
};

/// Input file exists but its contents are malformed.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Input file is well-formed but uses a feature we do not handle
/// (e.g. 16-bit PGM, color PNM).
class UnsupportedFormatError : public FormatError {
public:
    using FormatError::FormatError;
};

/// Precondition violation: bad argument values, shape mismatches.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Non-finite value encountered during a numerical procedure.
/// Carries the parameter point at which the failure occurred.
class NumericError : public Error {
public:
    NumericError(const std::string& msg, std::vector<double> at)
        : Error(msg), point(std::move(at)) {}

    std::vector<double> point;
};

} // namespace wshrink
