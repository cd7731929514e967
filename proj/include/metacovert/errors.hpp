#pragma once

#include <stdexcept>
#include <string>

namespace metacovert {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class ToleranceError : public std::runtime_error {
public:
    ToleranceError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

class NoSignChangeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MaxIterationsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A requirement cannot be met inside the allowed search range.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace metacovert
