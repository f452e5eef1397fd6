#pragma once

#include <stdexcept>
#include <string>

namespace qpscat {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DegenerateBasisError : public Error {
public:
    using Error::Error;
};

class OrderTooLargeError : public Error {
public:
    using Error::Error;
};

// Evaluation requested at (or within the guard radius of) a kernel pole.
class SingularityError : public Error {
public:
    using Error::Error;
};

// Lattice-sum evaluation requested within the guard radius of a pole image.
class PoleProximityError : public Error {
public:
    using Error::Error;
};

// Shift distance d violates the resonance-free constraint for some mode.
class AdmissibilityError : public Error {
public:
    using Error::Error;
};

// Operation undefined at a Wood configuration (classical sums only).
class WoodFrequencyError : public Error {
public:
    using Error::Error;
};

class SlowConvergenceError : public Error {
public:
    using Error::Error;
};

class ResolutionError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// Iterative solve failed to reach the requested tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, int iterations, double best_residual)
        : Error(msg), iterations(iterations), best_residual(best_residual) {}
    int iterations;
    double best_residual;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace qpscat
