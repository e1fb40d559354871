#pragma once

#include <stdexcept>
#include <string>

namespace nlv {

/// Raised when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A Leggett outcome table would contain a negative entry.
class ConstraintViolation : public std::runtime_error {
public:
    ConstraintViolation(int r_a, int r_b, double deficit);

    int r_a() const noexcept { return r_a_; }
    int r_b() const noexcept { return r_b_; }
    /// Magnitude by which the offending probability is below zero.
    double deficit() const noexcept { return deficit_; }

private:
    int r_a_;
    int r_b_;
    double deficit_;
};

/// Counting data with no events, so no correlation can be estimated.
class DegenerateData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested an optimum for an inequality that cannot be violated.
class NoViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nlv
