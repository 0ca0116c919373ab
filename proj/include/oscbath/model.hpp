#ifndef OSCBATH_MODEL_HPP
#define OSCBATH_MODEL_HPP

#include <complex>

#include "oscbath/errors.hpp"

// Shared parameter types and elementary closed-form quantities.
// Units: hbar = 1; every frequency is an angular frequency.

namespace oscbath {

using ComplexValue = std::complex<double>;

// Physical parameters of the particle-bath system after frequency
// renormalization. omega_bar is the renormalized particle frequency,
// g the coupling strength (dimension of frequency), beta the inverse
// bath temperature, n0_init the initial particle occupation.
struct PhysParams {
    double omega_bar = 1.0;
    double g = 0.1;
    double beta = 2.0;
    double n0_init = 1.0;

    // Throws DomainError unless omega_bar > 0, g >= 0, beta > 0, n0_init >= 0.
    void validate() const;
};

// Finite cavity of radius R with wave speed c and N bath modes
// omega_k = k pi c / R, k = 1..N.
struct CavityConfig {
    double R = 1.0;
    double c = 1.0;
    int N = 1;

    double delta_omega() const { return 3.14159265358979323846 * c / R; }
    double omega_k(int k) const { return k * delta_omega(); }
    // Mode coupling eta with g = eta^2 / (2 delta_omega).
    double eta(const PhysParams& p) const;

    void validate() const;
};

enum class CouplingRegime { Weak, Strong };

// Which boundary value of w_continuum to take for real arguments.
enum class BranchSide { Upper, Lower };

// Effective oscillation frequency sqrt(omega_bar^2 - pi^2 g^2 / 4).
// Throws StrongCouplingError when the radicand is not positive; all
// continuum closed forms in this library require the weak regime.
double kappa(const PhysParams& params);

// Weak iff g < 2 omega_bar / pi (equivalently kappa^2 > 0).
CouplingRegime coupling_regime(const PhysParams& params);

// Bose-Einstein occupation 1 / (e^{beta omega} - 1). Throws DomainError
// for omega <= 0. Uses expm1 so small beta*omega keeps full precision.
double bose_occupation(double omega, double beta);

// Boundary-valued resolvent factor:
//   z^2 + i pi g z - omega_bar^2   for Im z > 0,
//   z^2 - i pi g z - omega_bar^2   for Im z < 0.
// Real z without a side selection throws AmbiguousBranchError; the
// side-selecting overload returns alpha^2 - omega_bar^2 +- i pi g alpha.
ComplexValue w_continuum(ComplexValue z, const PhysParams& params);
ComplexValue w_continuum(double alpha, BranchSide side, const PhysParams& params);

} // namespace oscbath

#endif
