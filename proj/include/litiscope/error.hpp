#pragma once

#include <stdexcept>
#include <string>

namespace litiscope {

/// Base of every error raised by the library. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad or missing configuration, or a command-line usage problem (exit 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Unreadable or malformed input data (exit 3).
class DataError : public Error {
public:
    using Error::Error;
};

/// A model could not be fitted on the data it was given (exit 4).
class TrainingError : public Error {
public:
    using Error::Error;
};

/// An iterative solver stopped before meeting its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace litiscope
