#pragma once

#include <stdexcept>
#include <string>

namespace gridsight {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem / stream failures (CLI exit code 2).
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

/// Invalid inputs, bad arguments, broken invariants (CLI exit code 3).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// Feature vector / model dimension mismatches (CLI exit code 4).
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// What exactly went wrong while parsing a binary file format.
enum class ParseFault {
    BadMagic,
    BadHeader,
    BadMaxval,
    Truncated,
    BadVersion,
    LengthMismatch,
};

/// Malformed file contents. Carries the fault kind so callers can
/// distinguish, say, a truncated body from a bad header.
class ParseError : public ValidationError {
public:
    ParseError(ParseFault fault, const std::string& msg)
        : ValidationError(msg), fault_(fault) {}

    ParseFault fault() const { return fault_; }

private:
    ParseFault fault_;
};

} // namespace gridsight
