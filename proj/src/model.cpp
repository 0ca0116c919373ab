#include "oscbath/model.hpp"

#include <cmath>

namespace oscbath {

namespace {
constexpr double pi = 3.14159265358979323846;
}

void PhysParams::validate() const {
    if (!(omega_bar > 0.0) || !std::isfinite(omega_bar))
        throw DomainError("omega_bar must be positive and finite");
    if (!(g >= 0.0) || !std::isfinite(g))
        throw DomainError("g must be nonnegative and finite");
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw DomainError("beta must be positive and finite");
    if (!(n0_init >= 0.0) || !std::isfinite(n0_init))
        throw DomainError("n0_init must be nonnegative and finite");
}

double CavityConfig::eta(const PhysParams& p) const {
    return std::sqrt(2.0 * p.g * delta_omega());
}

void CavityConfig::validate() const {
    if (!(R > 0.0) || !std::isfinite(R))
        throw DomainError("cavity radius R must be positive and finite");
    if (!(c > 0.0) || !std::isfinite(c))
        throw DomainError("wave speed c must be positive and finite");
    if (N < 1)
        throw DomainError("bath mode count N must be at least 1");
}

double kappa(const PhysParams& params) {
    const double radicand =
        params.omega_bar * params.omega_bar - pi * pi * params.g * params.g / 4.0;
    if (!(radicand > 0.0))
        throw StrongCouplingError(
            "omega_bar^2 - pi^2 g^2/4 <= 0: closed forms require weak coupling");
    return std::sqrt(radicand);
}

CouplingRegime coupling_regime(const PhysParams& params) {
    const double radicand =
        params.omega_bar * params.omega_bar - pi * pi * params.g * params.g / 4.0;
    return radicand > 0.0 ? CouplingRegime::Weak : CouplingRegime::Strong;
}

double bose_occupation(double omega, double beta) {
    if (!(omega > 0.0))
        throw DomainError("bose_occupation requires omega > 0");
    if (!(beta > 0.0))
        throw DomainError("bose_occupation requires beta > 0");
    // expm1 keeps precision for beta*omega << 1; for beta*omega > ~700 the
    // exponential overflows to inf and the occupation correctly rounds to 0.
    return 1.0 / std::expm1(beta * omega);
}

ComplexValue w_continuum(ComplexValue z, const PhysParams& params) {
    if (z.imag() == 0.0)
        throw AmbiguousBranchError(
            "w_continuum on the real axis needs an explicit branch side");
    const double s = z.imag() > 0.0 ? 1.0 : -1.0;
    return z * z + ComplexValue(0.0, s * pi * params.g) * z
         - ComplexValue(params.omega_bar * params.omega_bar, 0.0);
}

ComplexValue w_continuum(double alpha, BranchSide side, const PhysParams& params) {
    const double s = side == BranchSide::Upper ? 1.0 : -1.0;
    return ComplexValue(alpha * alpha - params.omega_bar * params.omega_bar,
                        s * pi * params.g * alpha);
}

} // namespace oscbath
