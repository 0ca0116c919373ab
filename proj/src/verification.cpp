#include "oscbath/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "oscbath/bare_dynamics.hpp"
#include "oscbath/dressed_dynamics.hpp"
#include "oscbath/errors.hpp"
#include "oscbath/spectrum.hpp"

namespace oscbath {
namespace {

constexpr double pi = 3.14159265358979323846;

// Pinned acceptance tolerances. These are the published bounds the suite
// certifies against; loosening one here is a contract change.
constexpr double plateau_lo = 0.150;
constexpr double plateau_hi = 0.170;
constexpr double plateau_span_max = 0.01;
constexpr double bose_reference = 0.156518;
constexpr double bose_margin_max = 0.015;
constexpr double memory_trace_max = 1e-3;
constexpr double orthonormality_max = 1e-10;
constexpr double eigenfrequency_rel_max = 1e-9;
constexpr double unitarity_max = 1e-8;
constexpr double c1_route_max = 1e-6;
constexpr double c2_route_max = 1e-5;
constexpr double s1_tail_rel_max = 0.15;
constexpr double s2_tail_rel_max = 0.20;
constexpr double f00_term_rel_max = 0.20;
constexpr double cavity_consistency_max = 2e-3;
constexpr double divergence_rate_rel_max = 0.05;
constexpr double switch_on_reference = 1.074023;
constexpr double switch_on_tol = 1e-5;

PhysParams figure_params(double n0 = 1.0) {
    PhysParams p;
    p.omega_bar = 1.0;
    p.g = 0.1;
    p.beta = 2.0;
    p.n0_init = n0;
    return p;
}

std::string format(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof(buf), pattern, args);
    va_end(args);
    return std::string(buf);
}

CriterionResult criterion_plateau(const quad::QuadratureSpec& spec) {
    const auto p = figure_params();
    double bare[3];
    double dressed[3];
    const double ts[3] = {40.0, 50.0, 60.0};
    for (int i = 0; i < 3; ++i) {
        bare[i] = occupation_bare_renormalized(p, ts[i], spec).total;
        dressed[i] = occupation_dressed_continuum(p, ts[i], spec).total;
    }
    auto settled = [](const double* v) {
        const auto [lo, hi] = std::minmax({v[0], v[1], v[2]});
        const double margin = lo - bose_reference;
        return lo >= plateau_lo && hi <= plateau_hi && hi - lo < plateau_span_max &&
               margin > 0.0 && margin < bose_margin_max;
    };
    CriterionResult r{1, "thermal plateau", settled(bare) && settled(dressed), ""};
    r.detail = format("bare {%.6f, %.6f, %.6f} dressed {%.6f, %.6f, %.6f}, window "
                      "[%.3f, %.3f], Bose reference %.6f",
                      bare[0], bare[1], bare[2], dressed[0], dressed[1], dressed[2],
                      plateau_lo, plateau_hi, bose_reference);
    return r;
}

CriterionResult criterion_memory_erasure(const quad::QuadratureSpec& spec) {
    double bare[3];
    double dressed[3];
    const double n0s[3] = {0.0, 1.0, 5.0};
    for (int i = 0; i < 3; ++i) {
        const auto p = figure_params(n0s[i]);
        bare[i] = occupation_bare_renormalized(p, 50.0, spec).total;
        dressed[i] = occupation_dressed_continuum(p, 50.0, spec).total;
    }
    auto spread = [](const double* v) {
        const auto [lo, hi] = std::minmax({v[0], v[1], v[2]});
        return hi - lo;
    };
    const double sb = spread(bare);
    const double sd = spread(dressed);
    CriterionResult r{2, "memory erasure",
                      sb < memory_trace_max && sd < memory_trace_max, ""};
    r.detail = format("t=50 spread over n0 in {0, 1, 5}: bare %.3e, dressed %.3e, "
                      "bound %.0e",
                      sb, sd, memory_trace_max);
    return r;
}

CriterionResult criterion_finite_exactness(const quad::QuadratureSpec&) {
    const auto p = figure_params();
    CavityConfig cav;
    cav.R = 160.0 * pi;
    cav.c = 1.0;
    cav.N = 512;
    const auto secular = solve_spectrum(cav, p, SpectrumMethod::FiniteSecular);
    const auto dense = solve_spectrum(cav, p, SpectrumMethod::DenseEigenOracle);

    const double ortho = orthonormality_defect(secular);
    double freq_rel = 0.0;
    for (int r = 0; r <= cav.N; ++r) {
        freq_rel = std::max(freq_rel, std::fabs(secular.Omegas[r] - dense.Omegas[r]) /
                                          dense.Omegas[r]);
    }
    double bogo = 0.0;
    double row = 0.0;
    for (int mu : {0, 1, 256}) {
        for (double t : {0.0, 1.0, 10.0}) {
            bogo = std::max(bogo, bogoliubov_unitarity_defect(secular, mu, t));
            row = std::max(row, f_unitarity_defect(secular, mu, t));
        }
    }
    CriterionResult r{3, "finite-cavity exactness",
                      ortho < orthonormality_max && freq_rel < eigenfrequency_rel_max &&
                          bogo < unitarity_max && row < unitarity_max,
                      ""};
    r.detail = format("N=512: orthonormality %.2e, eigenfrequency rel %.2e, "
                      "transformation unitarity %.2e, amplitude-row unitarity %.2e",
                      ortho, freq_rel, bogo, row);
    return r;
}

CriterionResult criterion_closed_vs_quadrature(const quad::QuadratureSpec& spec) {
    const auto p = figure_params();
    double c1_worst = 0.0;
    for (double t : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
        c1_worst = std::max(c1_worst,
                            std::fabs(C1_quadrature(p, t, spec) - C1_closed(p, t)));
    }
    double c2_worst = 0.0;
    for (double w : {0.5, 1.0, 1.5}) {
        for (double t : {1.0, 5.0, 20.0}) {
            c2_worst = std::max(c2_worst, std::fabs(C2_quadrature(w, p, t, spec) -
                                                    C2_closed(w, p, t)));
        }
    }
    CriterionResult r{4, "closed forms against quadrature",
                      c1_worst < c1_route_max && c2_worst < c2_route_max, ""};
    r.detail = format("worst C1 route gap %.2e (bound %.0e), worst C2 route gap %.2e "
                      "(bound %.0e, resonance row included)",
                      c1_worst, c1_route_max, c2_worst, c2_route_max);
    return r;
}

CriterionResult criterion_long_time_tails(const quad::QuadratureSpec& spec) {
    const auto p = figure_params();
    const double t = 40.0;
    const double s1 = S1_laplace(p, t, spec);
    const double s1_rel = std::fabs(s1 / S1_asymptotic(p, t) - 1.0);
    const double s2 = S2_laplace(1.5, p, t, spec);
    const double s2_rel = std::fabs(s2 / S2_asymptotic(1.5, p, t) - 1.0);
    const double tail_estimate = 16.0 * p.g * p.g / std::pow(t, 6);
    const double c1 = C1_closed(p, t);
    const double envelope_term = f00_abs2_longtime(p, t) - tail_estimate;
    const double env_rel = std::fabs(envelope_term / (c1 * c1) - 1.0);
    const double sine_rel = std::fabs(s1 * s1 / tail_estimate - 1.0);
    CriterionResult r{5, "long-time tails",
                      s1_rel < s1_tail_rel_max && s2_rel < s2_tail_rel_max &&
                          env_rel < f00_term_rel_max && sine_rel < f00_term_rel_max,
                      ""};
    r.detail = format("t=40 relative gaps: S1 %.3g (bound %.2f), S2 %.3g (bound %.2f), "
                      "modulus envelope term %.3g, modulus tail term %.3g (bound %.2f)",
                      s1_rel, s1_tail_rel_max, s2_rel, s2_tail_rel_max, env_rel,
                      sine_rel, f00_term_rel_max);
    return r;
}

CriterionResult criterion_cavity_consistency(const quad::QuadratureSpec& spec) {
    const auto p = figure_params();
    CavityConfig cav;
    cav.R = 40.0 * pi;
    cav.c = 1.0;
    cav.N = 128;
    const auto basis = solve_spectrum(cav, p, SpectrumMethod::FiniteSecular);
    double worst = 0.0;
    double worst_t = 0.0;
    for (double t : {1.0, 2.0, 5.0, 10.0}) {
        const double fin = occupation_dressed_finite(basis, p, t).total;
        const double cont = occupation_dressed_continuum(p, t, spec).total;
        if (std::fabs(fin - cont) > worst) {
            worst = std::fabs(fin - cont);
            worst_t = t;
        }
    }
    CriterionResult r{6, "cavity-continuum consistency", worst < cavity_consistency_max,
                      ""};
    r.detail = format("N=128, R=40pi: worst |finite - continuum| %.3e at t=%g "
                      "(bound %.0e)",
                      worst, worst_t, cavity_consistency_max);
    return r;
}

CriterionResult criterion_vacuum_divergence(const quad::QuadratureSpec& spec) {
    const auto p = figure_params();
    const auto vals = vacuum_divergence_probe(p, 20.0, {100.0, 200.0, 400.0}, spec);
    const double rate = p.g / p.omega_bar * std::log(2.0);
    const double rel1 = std::fabs((vals[1] - vals[0]) / rate - 1.0);
    const double rel2 = std::fabs((vals[2] - vals[1]) / rate - 1.0);
    CriterionResult r{7, "vacuum log divergence",
                      rel1 < divergence_rate_rel_max && rel2 < divergence_rate_rel_max,
                      ""};
    r.detail = format("cutoff-doubling increments %.6f, %.6f against (g/omega) ln 2 = "
                      "%.6f (rel %.3f, %.3f)",
                      vals[1] - vals[0], vals[2] - vals[1], rate, rel1, rel2);
    return r;
}

CriterionResult criterion_switch_on(const quad::QuadratureSpec&, bool inject_fault) {
    const auto p = figure_params();
    const double tol = inject_fault ? 1e-18 : switch_on_tol;
    const double jump = memory_coefficient_K(p, 0.0);
    const double before = memory_coefficient_K(p, -1.0);
    CriterionResult r{8, "switch-on discontinuity",
                      std::fabs(jump - switch_on_reference) < tol && before == 1.0, ""};
    r.detail = format("K(0+) = %.8f against %.6f (tol %.0e%s), K(t<0) = %g",
                      jump, switch_on_reference, tol,
                      inject_fault ? ", tampered" : "", before);
    return r;
}

} // namespace

CriterionResult run_criterion(int id, const quad::QuadratureSpec& spec, bool inject_fault) {
    spec.validate();
    switch (id) {
        case 1: return criterion_plateau(spec);
        case 2: return criterion_memory_erasure(spec);
        case 3: return criterion_finite_exactness(spec);
        case 4: return criterion_closed_vs_quadrature(spec);
        case 5: return criterion_long_time_tails(spec);
        case 6: return criterion_cavity_consistency(spec);
        case 7: return criterion_vacuum_divergence(spec);
        case 8: return criterion_switch_on(spec, inject_fault);
        default: throw DomainError("criterion id must be 1..8, got " + std::to_string(id));
    }
}

std::vector<CriterionResult> run_acceptance(VerifyLevel level,
                                            const quad::QuadratureSpec& spec,
                                            bool inject_fault) {
    spec.validate();
    std::vector<CriterionResult> results;
    const bool full = level == VerifyLevel::Full;
    for (const int id : full ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8}
                             : std::vector<int>{3, 4, 8}) {
        results.push_back(run_criterion(id, spec, inject_fault));
    }
    return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results) {
        if (!r.pass) return false;
    }
    return true;
}

} // namespace oscbath
