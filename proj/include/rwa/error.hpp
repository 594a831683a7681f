#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace rwa {

// Base of every error the library raises. The CLI maps the subclasses onto
// exit codes: InvalidArgument/ParseError -> 2, numeric errors -> 3, IoError -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated precondition (bad parameter, mismatched lengths, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Malformed textual input; `token()` names the offending piece.
class ParseError : public InvalidArgument {
public:
    ParseError(const std::string& what, std::string token)
        : InvalidArgument(what + ": '" + token + "'"), token_(std::move(token)) {}
    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

// Evaluation point outside the admissible domain (pole, point on a support).
class DomainError : public Error {
public:
    using Error::Error;
};

// A result whose rounding error cannot be bounded (catastrophic cancellation).
class ConditioningError : public Error {
public:
    using Error::Error;
};

// Quadrature that did not reach its target; carries the best estimate.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, std::complex<double> estimate, double error_estimate)
        : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}
    std::complex<double> estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    std::complex<double> estimate_;
    double error_estimate_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace rwa
