#pragma once

#include <stdexcept>
#include <string>

namespace qtel {

// Base of every error thrown by the library. Callers that only need to
// report a failure can catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Input violates a value invariant (non-positive probability, bad sum,
// unnormalized state).
class InvalidInput : public Error {
public:
    using Error::Error;
};

// Some Schmidt probability exceeds 1/d, so no faithful protocol exists.
class InfeasibleSpectrum : public Error {
public:
    using Error::Error;
};

class NoPartition : public Error {
public:
    using Error::Error;
};

// Every phase-factor strategy failed. Carries the best residual the
// numerical search reached so callers can report it.
class PhaseFactorsNotFound : public Error {
public:
    PhaseFactorsNotFound(const std::string& what, double best_residual)
        : Error(what), best_residual_(best_residual) {}

    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

class DegenerateColumns : public Error {
public:
    using Error::Error;
};

class RankOrder : public Error {
public:
    using Error::Error;
};

}  // namespace qtel
