#ifndef OSCBATH_QUADRATURE_HPP
#define OSCBATH_QUADRATURE_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "oscbath/errors.hpp"

namespace oscbath::quad {

// Integrand over a real coordinate.  Callables are invoked at deterministic
// node sequences; two runs with the same spec evaluate at bitwise-identical
// abscissae and combine partial sums in a fixed order.
using Fn = std::function<double(double)>;

// How a semi-infinite domain is reduced to finite work.
struct Truncation {
    enum class Kind { FixedUpper, TailBound };

    Kind kind = Kind::TailBound;
    // FixedUpper: integrate [0, omega_max] and report the tail as untracked.
    double omega_max = 0.0;
    // TailBound: map [0, inf) -> [0, 1) via x = scale*u/(1-u); scale sets the
    // abscissa where half the unit interval is spent.
    double scale = 1.0;

    static Truncation fixed_upper(double omega_max);
    static Truncation tail_bound(double scale = 1.0);
};

struct QuadratureSpec {
    double abs_tol = 1e-9;
    double rel_tol = 1e-7;
    int max_subdivisions = 10000;
    Truncation truncation = Truncation::tail_bound();
    // Expected spacing of integrand sign changes, when known.  Oscillatory
    // integration uses it to place lobe boundaries; other routines ignore it.
    std::optional<double> oscillation_period_hint;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions_used = 0;
    // Bound on the discarded tail; 0 when the full domain was covered.
    double truncation_tail_bound = 0.0;

    bool converged(const QuadratureSpec& spec) const;
};

// Adaptive Gauss-Kronrod over a finite interval.
QuadratureResult integrate_interval(const Fn& f, double a, double b,
                                    const QuadratureSpec& spec);

// Integral of f over [0, inf) under the spec's truncation policy.
QuadratureResult integrate_semi_infinite(const Fn& f, const QuadratureSpec& spec);

// Cauchy principal value of f over [0, inf) with one interior simple pole.
// The window around the pole is folded symmetrically so the divergent parts
// cancel by construction rather than by small-offset approximation.  A pole
// that fails the simple-pole order probe raises PoleOrderError.
QuadratureResult integrate_principal_value(const Fn& f, double pole,
                                           const QuadratureSpec& spec);

// Integral over [0, inf) of an integrand oscillating at angular frequency
// `frequency`: summed lobe by lobe with tail acceleration once the lobe
// magnitudes decay monotonically.  frequency <= 0 falls back to the plain
// semi-infinite routine.
QuadratureResult integrate_oscillatory(const Fn& f, double frequency,
                                       const QuadratureSpec& spec);

} // namespace oscbath::quad

#endif
