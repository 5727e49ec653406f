#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specwarp {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs that violate an operation's preconditions: empty or too-short
/// signals, non-finite samples, non-positive sample rates, bad parameters.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// Warp expression text that could not be parsed.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t position)
        : Error(message + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    /// 0-based character offset of the offending token.
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Warp expression evaluation failed: division by zero, log of a
/// non-positive value, or a non-finite result.
class EvalError : public Error {
public:
    EvalError(const std::string& message, double f_hz)
        : Error(message), f_hz_(f_hz) {}

    /// The frequency value the expression was being evaluated at.
    double f_hz() const noexcept { return f_hz_; }

private:
    double f_hz_;
};

/// A warped frequency exceeded Nyquist under the strict policy.
class NyquistError : public Error {
public:
    using Error::Error;
};

/// Correlation is undefined because an input sequence has zero variance.
class UndefinedCorrelationError : public Error {
public:
    using Error::Error;
};

/// Malformed or unsupported audio file contents.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level failure (missing file, truncated data, unwritable path).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace specwarp
