#ifndef OSCBATH_SPECTRUM_HPP
#define OSCBATH_SPECTRUM_HPP

#include <vector>

#include "oscbath/model.hpp"

namespace oscbath {

enum class SpectrumMethod {
    // Roots of the finite-N secular function, matrix elements from the
    // explicit normalization sum.
    FiniteSecular,
    // Roots of the cavity cotangent form with closed-form particle-row
    // elements, columns renormalized numerically afterwards.
    CavityCotangent,
    // Direct symmetric diagonalization; reference implementation, capped
    // at N <= 512.
    DenseEigenOracle,
};

// Normal-mode basis of the particle + N bath oscillators: N+1 strictly
// increasing eigenfrequencies Omega_r and the orthogonal transformation
// with particle row t0[r] and bath rows tk(k, r).  Bath rows follow from
// the eigenvector structure
//   t_k^r = eta omega_k t0[r] / (omega_k^2 - Omega_r^2)
// and are evaluated on demand; only the dense oracle stores its full
// eigenvector matrix.
struct NormalModeBasis {
    std::vector<double> Omegas;
    std::vector<double> t0;
    CavityConfig config;
    PhysParams params;
    SpectrumMethod method = SpectrumMethod::FiniteSecular;

    // Largest |column norm^2 - 1| of the raw closed-form matrix before the
    // numerical renormalization; 0 for the other construction methods.
    double pre_renormalization_defect = 0.0;

    // Row-major (N+1)x(N+1) eigenvector matrix, dense oracle only.
    std::vector<double> dense;

    int modes() const { return static_cast<int>(Omegas.size()); }

    // Bath-row element, k in [1, N], r in [0, N].
    double tk(int k, int r) const;
};

// omega_bar^2 - Omega^2 - eta^2 Omega^2 sum_k 1/(omega_k^2 - Omega^2).
// Roots are the finite-N eigenfrequencies; the function falls to -inf
// approaching each bath pole from below and returns from +inf above it.
// Throws PoleError when Omega lies within relative 1e-14 of a bath mode.
double secular_residual_finite(double Omega, const CavityConfig& config,
                               const PhysParams& params);

// cot(R Omega/c) - Omega/(pi g) - (c/(R Omega)) (1 - R omega_bar^2/(pi g c)).
// Roots are the large-N cavity eigenfrequencies, one per interval
// (k pi c/R, (k+1) pi c/R).  Throws PoleError where sin(R Omega/c)
// vanishes, DomainError for Omega < 0.
double cotangent_residual(double Omega, const CavityConfig& config,
                          const PhysParams& params);

NormalModeBasis solve_spectrum(const CavityConfig& config, const PhysParams& params,
                               SpectrumMethod method);

// max over (mu, nu) of |sum_r t_mu^r t_nu^r - delta_{mu nu}|.
double orthonormality_defect(const NormalModeBasis& basis);

// Partial sum sum_{k=1}^{terms} 1/(k^2 - u^2); converges to
// (1/2) [1/u^2 - (pi/u) cot(pi u)] as terms grows.  Throws PoleError for
// integer u, DomainError for terms < 1.
double cotangent_sum_identity(double u, long long terms);

} // namespace oscbath

#endif
