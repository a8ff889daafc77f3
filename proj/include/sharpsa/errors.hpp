#pragma once

#include <stdexcept>
#include <string>

namespace sharpsa {

/// Dykstra ran out of sweeps: empty or ill-conditioned intersection.
struct NonConvergence : std::runtime_error {
    int sweeps;
    double residual;
    NonConvergence(int sweeps_, double residual_)
        : std::runtime_error("projection did not converge after " + std::to_string(sweeps_) +
                             " sweeps (residual " + std::to_string(residual_) + ")"),
          sweeps(sweeps_),
          residual(residual_) {}
};

struct MissingLmo : std::runtime_error {
    MissingLmo() : std::runtime_error("feasible set has no linear minimization oracle") {}
};

struct NoGradient : std::runtime_error {
    NoGradient() : std::runtime_error("problem has no exact gradient oracle") {}
};

struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientStates : std::runtime_error {
    explicit InsufficientStates(const std::string& what) : std::runtime_error(what) {}
};

struct AllOptimal : std::runtime_error {
    AllOptimal() : std::runtime_error("objective is constant over the polytope; sharpness constant undefined") {}
};

struct InvalidRegime : std::runtime_error {
    explicit InvalidRegime(const std::string& what) : std::runtime_error(what) {}
};

struct InfeasibleDual : std::runtime_error {
    explicit InfeasibleDual(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sharpsa
