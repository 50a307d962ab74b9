#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace radialbc {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed user input (bad numbers, unknown keys, missing files).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A well-formed request the physics or the numerics refuses:
/// unsupported origin class, fall to the center, policy violations,
/// evaluation outside a model's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The origin behaviour is r^{-2} log r like or worse, or a tabulated
/// trend could not be classified.
class ClassificationError : public DomainError {
public:
    using DomainError::DomainError;
};

/// (l + 1/2)^2 < 2mV0 (or Z^2 for Klein-Gordon): the exponent P is imaginary.
class FallToCenterError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A boundary policy that the indicial analysis does not admit.
class PolicyError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Series start-off point too far from the origin for the retained terms.
class StartOffError : public DomainError {
public:
    using DomainError::DomainError;
};

/// The inward sweep was requested at an energy with no decaying tail.
class NotBoundRegimeError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Volume term of the small-sphere residual does not converge.
class DivergentVolumeError : public DomainError {
public:
    using DomainError::DomainError;
};

/// The energy window does not contain the requested level.
class BracketError : public DomainError {
public:
    BracketError(std::string what, int nodes_lo, int nodes_hi)
        : DomainError(std::move(what)), nodes_lo_(nodes_lo), nodes_hi_(nodes_hi) {}

    int nodes_lo() const noexcept { return nodes_lo_; }
    int nodes_hi() const noexcept { return nodes_hi_; }

private:
    int nodes_lo_;
    int nodes_hi_;
};

struct BracketStep {
    double lo;
    double hi;
};

/// Iteration limit exhausted.
class ConvergenceError : public Error {
public:
    ConvergenceError(std::string what, std::vector<BracketStep> history = {})
        : Error(std::move(what)), history_(std::move(history)) {}

    const std::vector<BracketStep>& history() const noexcept { return history_; }

private:
    std::vector<BracketStep> history_;
};

} // namespace radialbc
