#pragma once

#include <stdexcept>
#include <string>

namespace expact {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the real-valued domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation at a pole or cusp of the requested function.
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// An iterative scheme stopped before reaching the requested accuracy.
/// Carries the last estimate so callers can still inspect it.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_estimate)
        : Error(what), last_estimate_(last_estimate) {}

    double last_estimate() const noexcept { return last_estimate_; }

private:
    double last_estimate_;
};

/// Simulated state became non-finite. Carries the offending time.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double time)
        : Error(what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// A closed-form evaluation was requested outside its validity table.
class NotClosedFormError : public Error {
public:
    using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace expact
