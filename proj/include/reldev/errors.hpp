#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reldev {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad fraction, bandwidth, index...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Inconsistent configuration, e.g. a discrete nu support point missing from a path.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Operation requested for a benchmark kind that does not support it.
class NotApplicable : public Error {
public:
    using Error::Error;
};

/// Base for failures that depend on the data rather than the call.
class NumericError : public Error {
public:
    using Error::Error;
};

class DegenerateWindow : public NumericError {
public:
    DegenerateWindow(double t, double h, double lambda);

    double t() const noexcept { return t_; }
    double bandwidth() const noexcept { return h_; }
    double lambda() const noexcept { return lambda_; }

private:
    double t_;
    double h_;
    double lambda_;
};

class EmptyWindow : public NumericError {
public:
    using NumericError::NumericError;
};

class WindowTooSmall : public NumericError {
public:
    using NumericError::NumericError;
};

class NoFeasibleBandwidth : public NumericError {
public:
    using NumericError::NumericError;
};

/// Input file problems.
class DataError : public Error {
public:
    using Error::Error;
};

class ParseError : public DataError {
public:
    ParseError(std::size_t row, std::size_t column, const std::string& detail);

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class TooShort : public DataError {
public:
    using DataError::DataError;
};

}  // namespace reldev
