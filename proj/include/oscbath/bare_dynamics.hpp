#pragma once

#include <vector>

#include "oscbath/model.hpp"
#include "oscbath/quadrature.hpp"
#include "oscbath/spectrum.hpp"

// Evolution in the bare coordinates. Two routes to the particle occupation:
//
//   * finite cavity: the exact linear canonical transformation built from a
//     NormalModeBasis, summed over all N + 1 modes;
//   * continuum: closed damping forms plus a thermal frequency integral,
//     with the temperature-independent (vacuum) piece subtracted, since its
//     frequency integral grows logarithmically with the cutoff.
//
// The breakdown fields follow the structure of the occupation formula:
// memory multiplies the initial occupation, thermal carries the Bose-weighted
// bath sum, vacuum collects the |beta|^2 excitations out of the ground state.

namespace oscbath {

struct BogoliubovPair {
    ComplexValue alpha;
    ComplexValue beta;
};

// One time sample of the occupation. total = memory + thermal + vacuum holds
// exactly as written; quadrature_error accumulates integration error
// estimates and truncation tail bounds where quadrature was involved.
struct OccupationPoint {
    double t = 0.0;
    double total = 0.0;
    double memory_term = 0.0;
    double thermal_term = 0.0;
    double vacuum_term = 0.0;
    double quadrature_error = 0.0;
};

// Column store for a sampled trajectory. Times must be appended in strictly
// increasing order.
struct OccupationSeries {
    std::vector<double> times;
    std::vector<double> total;
    std::vector<double> memory_term;
    std::vector<double> thermal_term;
    std::vector<double> vacuum_term;

    void append(const OccupationPoint& point);
    std::size_t size() const { return times.size(); }
};

// Exact mode sums for the coefficients of the canonical transformation
// a_mu(t) = sum_nu alpha_{mu nu} a_nu + beta_{mu nu} a_nu^dagger.
// At t = 0 the pair reduces to (delta_{mu nu}, 0) up to the basis residual.
BogoliubovPair bogoliubov_finite(const NormalModeBasis& basis, int mu, int nu, double t);

// |sum_nu (|alpha|^2 - |beta|^2) - 1| for the given row; the exact
// transformation keeps this at zero, so the value measures accumulated
// numerical error of the basis.
double bogoliubov_unitarity_defect(const NormalModeBasis& basis, int mu, double t);

// Continuum-limit closed forms of the particle's diagonal coefficients,
// valid for t > 0 in the weak regime; at t = 0 they return the one-sided
// limit, which differs from the finite-cavity initial condition (the
// continuum limit and t -> 0 do not commute).
ComplexValue alpha00_continuum(const PhysParams& params, double t);
ComplexValue beta00_continuum(const PhysParams& params, double t);

// Spectral kernels of the continuum occupation. F weights the thermal
// integral; G is the vacuum-excitation density whose integral carries the
// logarithmic cutoff growth (G falls off only as 1/omega). Both are evaluated
// in a grouped arrangement that stays fully regular at omega = omega_bar.
double kernel_F(double omega, const PhysParams& params, double t);
double kernel_G(double omega, const PhysParams& params, double t);

// Coefficient carrying the whole memory of the initial state: the n0 part
// decays under the e^{-pi g t} envelope, plus the temperature-independent
// diagonal remnant. For t < 0 the interaction is off and the value is
// exactly n0.
double memory_coefficient_K(const PhysParams& params, double t);

// Occupation from the exact finite-cavity sums. No quadrature involved.
OccupationPoint occupation_bare_finite(const NormalModeBasis& basis, const PhysParams& params,
                                       double t);

// Renormalized continuum occupation: memory coefficient plus the thermal
// integral (g/omega_bar) * int F(omega, t) / (e^{beta omega} - 1) domega.
// The vacuum term is dropped by construction, so vacuum_term = 0.
OccupationPoint occupation_bare_renormalized(const PhysParams& params, double t,
                                             const quad::QuadratureSpec& spec);

// (g/omega_bar) * int_0^Lambda G domega for each cutoff. Successive values
// for doubled cutoffs differ by close to (g/omega_bar) ln 2, exhibiting the
// logarithmic growth that the renormalized occupation subtracts. Cutoffs
// must be increasing and at least 10 omega_bar.
std::vector<double> vacuum_divergence_probe(const PhysParams& params, double t,
                                            const std::vector<double>& cutoffs,
                                            const quad::QuadratureSpec& spec);

namespace detail {

// Continuum closed forms for the particle-bath cross coefficients at bath
// frequency omega_k. Intermediates only: the aggregated kernels above are the
// production path. Their overall signs follow the printed closed-form
// convention, which for alpha is opposite to the finite mode sums (moduli
// agree); see the agreement tests and README.
ComplexValue alpha0k_continuum(const PhysParams& params, double omega_k, double delta_omega,
                               double t);
ComplexValue beta0k_continuum(const PhysParams& params, double omega_k, double delta_omega,
                              double t);

} // namespace detail

} // namespace oscbath
