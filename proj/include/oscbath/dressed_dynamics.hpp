#pragma once

#include <vector>

#include "oscbath/bare_dynamics.hpp"
#include "oscbath/model.hpp"
#include "oscbath/quadrature.hpp"
#include "oscbath/spectrum.hpp"

// Evolution in the dressed coordinates, where a single excitation moves
// between the particle and the field with probability amplitudes and the
// occupation carries no temperature-independent piece. Finite cavities use
// the exact normal-mode sums. The continuum limit works with the amplitude
// functions C1/S1 (particle back to particle) and C2/S2 (particle to the
// bath mode at frequency omega), each available as a closed damping form or
// as a direct quadrature of its defining spectral integral.
//
// The frequency-resolved pair (C2, S2) exists in two variants. The printed
// closed/principal-value forms below have a nonzero t = 0 limit, which is
// inconsistent with the finite-cavity initial condition f(0) = identity.
// The boundary-corrected variants in the detail namespace restore the t = 0
// identity and keep the amplitude family summing to one; they are what
// occupation_dressed_continuum integrates. README covers the discrepancy.

namespace oscbath {

// f_{mu nu}(t) = sum_r t_mu^r t_nu^r e^{-i Omega_r t}: amplitude for an
// excitation prepared in dressed coordinate nu to be found in mu at time t.
ComplexValue f_matrix_finite(const NormalModeBasis& basis, int mu, int nu, double t);

// Full row f_{mu nu}(t), nu = 0..N, in O(N^2) total work.
std::vector<ComplexValue> f_matrix_row(const NormalModeBasis& basis, int mu, double t);

// |sum_nu |f_{mu nu}|^2 - 1|. The exact row sums to one, so the value
// measures the accumulated numerical error of the basis.
double f_unitarity_defect(const NormalModeBasis& basis, int mu, double t);

// Occupation in the dressed picture: |f00|^2 n0 + sum_k |f0k|^2 n_k with
// n_k the Bose occupation of bath mode k. vacuum_term is identically zero;
// no quadrature is involved. t = 0 returns n0 exactly.
OccupationPoint occupation_dressed_finite(const NormalModeBasis& basis,
                                          const PhysParams& params, double t);

// Continuum particle amplitude f00 = C1 + i S1. C1_closed is the residue
// damping form, valid in the weak regime for t >= 0. The quadrature forms
// evaluate the defining integrals 2g int alpha^2 {cos, -sin}(alpha t) /
// D(alpha) dalpha over (0, inf), D(w) = (w^2 - omega_bar^2)^2 + pi^2 g^2 w^2.
// At g = 0 that weight vanishes pointwise and the quadrature forms return 0,
// while the closed forms carry the distributional small-g limit.
double C1_closed(const PhysParams& params, double t);
double C1_quadrature(const PhysParams& params, double t, const quad::QuadratureSpec& spec);
double S1_quadrature(const PhysParams& params, double t, const quad::QuadratureSpec& spec);

// S1 with the sine transform rotated onto the negative imaginary axis: a
// damped precession term plus 2g times a Laplace integral whose integrand
// decays monotonically. Equal to S1_quadrature for all t >= 0 and cheaper
// once oscillation is fast; production route inside the occupation integral.
double S1_laplace(const PhysParams& params, double t, const quad::QuadratureSpec& spec);

// Power-law tail 4g/(omega_bar^4 t^3) of S1. Throws DomainError below
// t = 10/omega_bar where the tail formula does not apply.
double S1_asymptotic(const PhysParams& params, double t);

ComplexValue f00_continuum(const PhysParams& params, double t,
                           const quad::QuadratureSpec& spec);

// Long-time |f00|^2: the squared C1 envelope plus 16 g^2/(omega_bar^8 t^6).
double f00_abs2_longtime(const PhysParams& params, double t);

// Continuum particle-to-bath amplitudes at bath frequency omega, normalized
// so that f_{0 omega} = omega sqrt(delta_omega) (C2 + i S2) against a mode
// spacing delta_omega. C2_closed evaluates the residue form, which stays
// regular at omega = omega_bar since D never vanishes for g > 0. The
// quadrature forms treat the pole of the defining integrand at alpha = omega
// as a Cauchy principal value. S2_laplace is the rotated companion of
// S1_laplace.
double C2_closed(double omega, const PhysParams& params, double t);
double C2_quadrature(double omega, const PhysParams& params, double t,
                     const quad::QuadratureSpec& spec);
double S2_quadrature(double omega, const PhysParams& params, double t,
                     const quad::QuadratureSpec& spec);
double S2_laplace(double omega, const PhysParams& params, double t,
                  const quad::QuadratureSpec& spec);

// Power-law tail 4 sqrt(2) g^{3/2}/(omega^2 omega_bar^4 t^3) of S2.
double S2_asymptotic(double omega, const PhysParams& params, double t);

// Continuum dressed occupation: [C1^2 + S1^2] n0 plus the thermal integral
// int_0^wmax omega^2 [C2^2 + S2^2] n_B(omega) domega over the corrected
// amplitudes, truncated at wmax = max(50 omega_bar, 40/beta) with the tail
// bounded analytically into quadrature_error. memory_term carries the n0
// factor, vacuum_term = 0. For t < 0 the interaction is off and the value
// is exactly n0; the decoupled g = 0 limit returns n0 exactly at any t.
OccupationPoint occupation_dressed_continuum(const PhysParams& params, double t,
                                             const quad::QuadratureSpec& spec);

// C1^2 + S1^2 + int_0^Lambda omega^2 (C2^2 + S2^2) domega with the corrected
// amplitudes and a fixed Lambda = 200 omega_bar. The exact family sums to
// one; the returned value sits below that by the cutoff tail, about
// 2g/Lambda, plus an early-time transient of the same order.
double continuum_completeness(const PhysParams& params, double t,
                              const quad::QuadratureSpec& spec);

// Linear map from bare to dressed coordinates,
//   alpha_{mu nu} = (1/sqrt(w_mu)) sum_r t_mu^r t_nu^r sqrt(Omega_r),
// with w_0 = omega_bar and w_k the bath frequencies. Invertible; equals the
// identity at g = 0. Not orthogonal for g > 0: the particle row tends to
// (A00, small, ...) with A00 > 1 as the cavity grows.
struct DressingMatrix {
    int dim = 0;
    // Row-major dim x dim.
    std::vector<double> alpha;

    double operator()(int mu, int nu) const;
};

// Builds the dense matrix. Storage is (N+1)^2 doubles, so N is capped at
// 1024; larger requests throw DomainError.
DressingMatrix dressing_matrix(const NormalModeBasis& basis);

// Large-cavity limit of the particle's diagonal dressing element:
// (1/sqrt(omega_bar)) int_0^inf 2 g Omega^2 sqrt(Omega) / D(Omega) dOmega.
// Finite (the integrand tail falls as Omega^{-3/2}) and approaches 1 from
// above as g -> 0; g = 0 returns that limit value exactly.
double A00_integral(const PhysParams& params, const quad::QuadratureSpec& spec);

namespace detail {

// t = 0 value sqrt(2g) (omega^2 - omega_bar^2) / D(omega) of the printed C2.
double boundary_amplitude(double omega, const PhysParams& params);

// Corrected amplitudes: C2_closed - boundary_amplitude * cos(omega t) and
// S2_laplace + boundary_amplitude * sin(omega t). Zero at t = 0 up to the
// Laplace-leg quadrature residual, so the continuum occupation starts at n0.
double C2_boundary_corrected(double omega, const PhysParams& params, double t);
double S2_boundary_corrected(double omega, const PhysParams& params, double t,
                             const quad::QuadratureSpec& spec);

} // namespace detail

} // namespace oscbath
