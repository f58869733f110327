#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace arffklms {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid experiment or sampling configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Caller broke an API precondition (dimension mismatch, index out of range, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

// Non-finite sample fed to a filter.
class StreamError : public Error {
public:
    using Error::Error;
};

// Filter state became non-finite after an update.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& filter, std::size_t step)
        : Error(filter + " diverged at step " + std::to_string(step)), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace arffklms
