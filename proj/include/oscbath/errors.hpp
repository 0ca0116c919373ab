#ifndef OSCBATH_ERRORS_HPP
#define OSCBATH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace oscbath {

// Invalid argument outside the physical domain of an operation.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Coupling too strong for the closed-form branch: omega_bar^2 - pi^2 g^2/4 <= 0.
struct StrongCouplingError : std::runtime_error {
    explicit StrongCouplingError(const std::string& what) : std::runtime_error(what) {}
};

// Real argument passed to a boundary-valued function without picking a side.
struct AmbiguousBranchError : std::runtime_error {
    explicit AmbiguousBranchError(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation requested at (or within rounding distance of) a pole.
struct PoleError : std::runtime_error {
    explicit PoleError(const std::string& what) : std::runtime_error(what) {}
};

// The mode spectrum contains a non-oscillatory (runaway) solution.
struct StabilityError : std::runtime_error {
    explicit StabilityError(const std::string& what) : std::runtime_error(what) {}
};

// A root bracket failed to show the expected sign change.
struct BracketError : std::runtime_error {
    explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical integration failed to reach the requested tolerance.
struct QuadratureError : std::runtime_error {
    explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// Principal-value integrand whose singularity is not a simple pole.
struct PoleOrderError : QuadratureError {
    explicit PoleOrderError(const std::string& what) : QuadratureError(what) {}
};

// Bad run configuration (CLI / config file level).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace oscbath

#endif
