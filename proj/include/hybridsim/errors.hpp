#ifndef HYBRIDSIM_ERRORS_HPP
#define HYBRIDSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hybridsim {

// Scenario/config files that fail schema validation. CLI exit code 2.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// Inputs outside the physical domain of an operation. CLI exit code 3.
class PhysicsError : public std::runtime_error {
public:
    explicit PhysicsError(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative solver failed to converge. CLI exit code 4.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// The combined curvature of the atom trap dropped to zero or below.
// Carries the critical coupling curvature |U_c''| = m*omega_a0^2 at which
// the trap vanishes.
class TrapVanishedError : public PhysicsError {
public:
    TrapVanishedError(const std::string& msg, double critical_curvature)
        : PhysicsError(msg), critical_curvature_si(critical_curvature) {}
    double critical_curvature_si; // J/m^2
};

} // namespace hybridsim

#endif
