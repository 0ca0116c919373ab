#include "oscbath/bare_dynamics.hpp"

#include <cmath>
#include <complex>

#include "oscbath/errors.hpp"

namespace oscbath {

namespace {

constexpr double pi = 3.14159265358979323846;

// Trigonometric factors shared by every kernel at fixed t. c2/s2 carry the
// doubled damped-precession angle, ck/sk the single one.
struct Envelope {
    double kap;
    double pg;
    double e1;
    double eh;
    double c2;
    double s2;
    double ck;
    double sk;
};

Envelope make_envelope(const PhysParams& p, double t) {
    Envelope e;
    e.kap = kappa(p);
    e.pg = pi * p.g;
    e.e1 = std::exp(-e.pg * t);
    e.eh = std::exp(-e.pg * t / 2.0);
    e.c2 = std::cos(2.0 * e.kap * t);
    e.s2 = std::sin(2.0 * e.kap * t);
    e.ck = std::cos(e.kap * t);
    e.sk = std::sin(e.kap * t);
    return e;
}

double denom_D(double w, const PhysParams& p) {
    const double d = w * w - p.omega_bar * p.omega_bar;
    return d * d + pi * pi * p.g * p.g * w * w;
}

// Parts of the thermal kernel that do not oscillate in omega; the remaining
// e^{-pi g t / 2} group does, with phase omega * t.
double kernel_F_static(double w, const PhysParams& p, const Envelope& e, double /*t*/) {
    const double wb2 = p.omega_bar * p.omega_bar;
    const double sum2 = w * w + wb2;
    const double rat = (w * w - wb2) / sum2;
    const double pref = w * sum2 / denom_D(w, p);
    return pref *
           (1.0 + e.e1 / (4.0 * e.kap * e.kap) *
                      (4.0 * wb2 - e.pg * e.pg * e.c2 - 2.0 * e.pg * e.kap * rat * e.s2));
}

double kernel_F_osc(double w, const PhysParams& p, const Envelope& e, double t) {
    const double wb2 = p.omega_bar * p.omega_bar;
    const double sum2 = w * w + wb2;
    const double rat = (w * w - wb2) / sum2;
    const double pref = w * sum2 / denom_D(w, p);
    const double cw = std::cos(w * t);
    const double sw = std::sin(w * t);
    return -pref * (e.eh / e.kap) *
           (2.0 * e.kap * cw * e.ck + 4.0 * w * wb2 / sum2 * sw * e.sk - e.pg * rat * cw * e.sk);
}

double kernel_G_static(double w, const PhysParams& p, const Envelope& e, double /*t*/) {
    const double wb = p.omega_bar;
    const double m = w - wb;
    const double pp = w + wb;
    const double D = denom_D(w, p);
    const double quarter = e.e1 / (4.0 * e.kap * e.kap);
    return (w / D) *
           (m * m * (1.0 + quarter * 4.0 * wb * wb) +
            quarter * (2.0 * e.pg * e.pg * wb * w - e.pg * e.pg * (w * w + wb * wb) * e.c2 -
                       2.0 * e.pg * e.kap * pp * m * e.s2));
}

double kernel_G_osc(double w, const PhysParams& p, const Envelope& e, double t) {
    const double wb = p.omega_bar;
    const double m = w - wb;
    const double pp = w + wb;
    const double D = denom_D(w, p);
    const double cw = std::cos(w * t);
    const double sw = std::sin(w * t);
    return -(w / D) * (e.eh / e.kap) *
           (m * m * (2.0 * e.kap * cw * e.ck - 2.0 * wb * sw * e.sk) -
            e.pg * pp * m * cw * e.sk);
}

// One row of the canonical-transformation coefficients, O(N^2). Expanding
// the mode sum in powers of omega_nu lets the r-loop run once; each column
// then needs only two dot products against the basis column.
std::vector<BogoliubovPair> bogoliubov_row(const NormalModeBasis& basis, int mu, double t) {
    const int n = basis.config.N;
    const double w_mu = mu == 0 ? basis.params.omega_bar : basis.config.omega_k(mu);

    std::vector<ComplexValue> u(n + 1), v(n + 1);
    for (int r = 0; r <= n; ++r) {
        const double om = basis.Omegas[r];
        const double tmr = mu == 0 ? basis.t0[r] : basis.tk(mu, r);
        const ComplexValue ep = std::polar(1.0, om * t);
        const ComplexValue a_plus = tmr * (w_mu - om) / (4.0 * om) * ep;
        const ComplexValue a_minus = tmr * (w_mu + om) / (4.0 * om) * std::conj(ep);
        u[r] = (a_plus + a_minus) * om;
        v[r] = a_minus - a_plus;
    }

    std::vector<BogoliubovPair> row(n + 1);
    for (int nu = 0; nu <= n; ++nu) {
        const double w_nu = nu == 0 ? basis.params.omega_bar : basis.config.omega_k(nu);
        ComplexValue a{0.0, 0.0}, b{0.0, 0.0};
        for (int r = 0; r <= n; ++r) {
            const double tnr = nu == 0 ? basis.t0[r] : basis.tk(nu, r);
            a += u[r] * tnr;
            b += v[r] * tnr;
        }
        const double norm = std::sqrt(w_mu * w_nu);
        row[nu].alpha = (a + w_nu * b) / norm;
        row[nu].beta = (a - w_nu * b) / norm;
    }
    return row;
}

void check_index(const NormalModeBasis& basis, int idx, const char* name) {
    if (idx < 0 || idx > basis.config.N)
        throw DomainError(std::string(name) + " index out of range");
}

void check_matching_params(const NormalModeBasis& basis, const PhysParams& p) {
    if (basis.params.omega_bar != p.omega_bar || basis.params.g != p.g)
        throw DomainError("basis was built for different omega_bar or g");
}

struct IntegralWithError {
    double value = 0.0;
    double error = 0.0;
};

// Integrates static + oscillatory kernel parts over [0, upper]. Beyond
// t = 20 / omega_bar the omega * t phase is too fast for plain adaptive
// panels, so the oscillatory part goes through the lobe-summing route.
template <typename StaticFn, typename OscFn>
IntegralWithError split_kernel_integral(StaticFn&& f_static, OscFn&& f_osc, double upper,
                                        double t, double omega_bar,
                                        const quad::QuadratureSpec& spec) {
    IntegralWithError out;
    if (t * omega_bar >= 20.0) {
        quad::QuadratureSpec half = spec;
        half.abs_tol = spec.abs_tol / 2.0;
        const auto rs = quad::integrate_interval(f_static, 0.0, upper, half);
        quad::QuadratureSpec osc = half;
        osc.truncation = quad::Truncation::fixed_upper(upper);
        const auto ro = quad::integrate_oscillatory(
            [&](double w) { return f_osc(w); }, t, osc);
        out.value = rs.value + ro.value;
        out.error = rs.error_estimate + ro.error_estimate;
    } else {
        const auto r = quad::integrate_interval(
            [&](double w) { return f_static(w) + f_osc(w); }, 0.0, upper, spec);
        out.value = r.value;
        out.error = r.error_estimate;
    }
    return out;
}

} // namespace

void OccupationSeries::append(const OccupationPoint& point) {
    if (!times.empty() && point.t <= times.back())
        throw DomainError("occupation series times must be strictly increasing");
    times.push_back(point.t);
    total.push_back(point.total);
    memory_term.push_back(point.memory_term);
    thermal_term.push_back(point.thermal_term);
    vacuum_term.push_back(point.vacuum_term);
}

BogoliubovPair bogoliubov_finite(const NormalModeBasis& basis, int mu, int nu, double t) {
    check_index(basis, mu, "mu");
    check_index(basis, nu, "nu");
    const double w_mu = mu == 0 ? basis.params.omega_bar : basis.config.omega_k(mu);
    const double w_nu = nu == 0 ? basis.params.omega_bar : basis.config.omega_k(nu);
    const double norm = std::sqrt(w_mu * w_nu);

    BogoliubovPair pair{{0.0, 0.0}, {0.0, 0.0}};
    for (int r = 0; r <= basis.config.N; ++r) {
        const double om = basis.Omegas[r];
        const double tmr = mu == 0 ? basis.t0[r] : basis.tk(mu, r);
        const double tnr = nu == 0 ? basis.t0[r] : basis.tk(nu, r);
        const double pref = tmr * tnr / (4.0 * om * norm);
        const ComplexValue ep = std::polar(1.0, om * t);
        const ComplexValue em = std::conj(ep);
        pair.alpha += pref * ((w_mu - om) * (om - w_nu) * ep + (w_mu + om) * (om + w_nu) * em);
        pair.beta += pref * ((w_mu - om) * (om + w_nu) * ep + (w_mu + om) * (om - w_nu) * em);
    }
    return pair;
}

double bogoliubov_unitarity_defect(const NormalModeBasis& basis, int mu, double t) {
    check_index(basis, mu, "mu");
    const auto row = bogoliubov_row(basis, mu, t);
    double sum = 0.0;
    for (const auto& pair : row) sum += std::norm(pair.alpha) - std::norm(pair.beta);
    return std::fabs(sum - 1.0);
}

ComplexValue alpha00_continuum(const PhysParams& params, double t) {
    params.validate();
    if (t < 0.0) throw DomainError("alpha00_continuum requires t >= 0");
    const Envelope e = make_envelope(params, t);
    const double wb = params.omega_bar;
    const ComplexValue a(2.0 * wb + 2.0 * e.kap, -e.pg);
    const ComplexValue b(2.0 * wb - 2.0 * e.kap, -e.pg);
    const ComplexValue em = std::polar(1.0, -e.kap * t);
    return e.eh / (16.0 * wb * e.kap) * (a * a * em - b * b * std::conj(em));
}

ComplexValue beta00_continuum(const PhysParams& params, double t) {
    params.validate();
    if (t < 0.0) throw DomainError("beta00_continuum requires t >= 0");
    const Envelope e = make_envelope(params, t);
    const ComplexValue a(e.pg, 2.0 * e.kap);
    const ComplexValue b(e.pg, -2.0 * e.kap);
    const ComplexValue em = std::polar(1.0, -e.kap * t);
    return e.pg * e.eh / (8.0 * params.omega_bar * e.kap) * (a * em - b * std::conj(em));
}

double kernel_F(double omega, const PhysParams& params, double t) {
    params.validate();
    if (!(omega > 0.0)) throw DomainError("kernel_F requires omega > 0");
    const Envelope e = make_envelope(params, t);
    if (params.g == 0.0) {
        // The decoupled kernel is 0/0 at resonance; the half-angle form of
        // the brace keeps every digit.
        const double wb = params.omega_bar;
        const double m = omega - wb;
        const double pp = omega + wb;
        const double half = std::sin(m * t / 2.0);
        const double brace_over_m2 =
            m == 0.0 ? t * t : 4.0 * half * half / (m * m);
        return omega * (omega * omega + wb * wb) * brace_over_m2 / (pp * pp);
    }
    return kernel_F_static(omega, params, e, t) + kernel_F_osc(omega, params, e, t);
}

double kernel_G(double omega, const PhysParams& params, double t) {
    params.validate();
    if (!(omega > 0.0)) throw DomainError("kernel_G requires omega > 0");
    const Envelope e = make_envelope(params, t);
    if (params.g == 0.0) {
        // Same degenerate denominator as in kernel_F; here the (omega -
        // omega_bar)^2 factors cancel exactly and only the fast phase stays.
        const double pp = omega + params.omega_bar;
        const double half = std::sin(pp * t / 2.0);
        return 4.0 * omega * half * half / (pp * pp);
    }
    return kernel_G_static(omega, params, e, t) + kernel_G_osc(omega, params, e, t);
}

double memory_coefficient_K(const PhysParams& params, double t) {
    params.validate();
    if (t < 0.0) return params.n0_init;
    const Envelope e = make_envelope(params, t);
    const double wb2 = params.omega_bar * params.omega_bar;
    const double k2 = e.kap * e.kap;
    const double pg2 = e.pg * e.pg;
    const double part_n0 =
        e.e1 / (wb2 * k2) *
        (wb2 * wb2 + pg2 / 8.0 * (2.0 * wb2 - pg2) * e.c2 - pg2 * e.pg * e.kap / 4.0 * e.s2) *
        params.n0_init;
    const double part_vac = pg2 * e.e1 / (16.0 * wb2 * k2) *
                            (2.0 * wb2 + (2.0 * wb2 - pg2) * e.c2 - 2.0 * e.pg * e.kap * e.s2);
    return part_n0 + part_vac;
}

OccupationPoint occupation_bare_finite(const NormalModeBasis& basis, const PhysParams& params,
                                       double t) {
    params.validate();
    check_matching_params(basis, params);

    OccupationPoint point;
    point.t = t;
    if (t == 0.0) {
        // The transformation is the identity at t = 0; evaluating the sums
        // would only add the basis residual on top of that.
        point.total = params.n0_init;
        point.memory_term = params.n0_init;
        return point;
    }
    if (params.g == 0.0) {
        // Decoupled limit: the particle row is a pure phase, so the
        // occupation is conserved exactly, not up to cos^2 + sin^2 rounding.
        point.total = params.n0_init;
        point.memory_term = params.n0_init;
        return point;
    }

    const auto row = bogoliubov_row(basis, 0, t);
    point.memory_term = (std::norm(row[0].alpha) + std::norm(row[0].beta)) * params.n0_init;
    point.vacuum_term = std::norm(row[0].beta);
    for (int k = 1; k <= basis.config.N; ++k) {
        const double occupied = std::norm(row[k].alpha) + std::norm(row[k].beta);
        point.thermal_term += occupied * bose_occupation(basis.config.omega_k(k), params.beta);
        point.vacuum_term += std::norm(row[k].beta);
    }
    point.total = point.memory_term + point.thermal_term + point.vacuum_term;
    return point;
}

OccupationPoint occupation_bare_renormalized(const PhysParams& params, double t,
                                             const quad::QuadratureSpec& spec) {
    params.validate();
    spec.validate();

    OccupationPoint point;
    point.t = t;
    if (t < 0.0) {
        point.total = params.n0_init;
        point.memory_term = params.n0_init;
        return point;
    }

    point.memory_term = memory_coefficient_K(params, t);
    if (params.g > 0.0) {
        const Envelope e = make_envelope(params, t);
        const double wb = params.omega_bar;
        const double wmax = std::max(50.0 * wb, 40.0 / params.beta);
        const auto thermal = split_kernel_integral(
            [&](double w) { return kernel_F_static(w, params, e, t) *
                                   bose_occupation(w, params.beta); },
            [&](double w) { return kernel_F_osc(w, params, e, t) *
                                   bose_occupation(w, params.beta); },
            wmax, t, wb, spec);

        // Past the truncation the kernel is below ~1/omega times a bounded
        // brace and the Bose weight is essentially e^{-beta omega}.
        const double brace_bound =
            1.0 + e.e1 / (4.0 * e.kap * e.kap) * (4.0 * wb * wb + e.pg * e.pg +
                                                  2.0 * e.pg * e.kap) +
            e.eh / e.kap * (2.0 * e.kap + 2.0 * wb + e.pg);
        const double tail =
            1.1 * brace_bound / (params.beta * wmax) * std::exp(-params.beta * wmax);

        point.thermal_term = params.g / wb * thermal.value;
        point.quadrature_error = params.g / wb * (thermal.error + tail);
    }
    point.total = point.memory_term + point.thermal_term;
    return point;
}

std::vector<double> vacuum_divergence_probe(const PhysParams& params, double t,
                                            const std::vector<double>& cutoffs,
                                            const quad::QuadratureSpec& spec) {
    params.validate();
    spec.validate();
    double prev = 0.0;
    for (double lambda : cutoffs) {
        if (!std::isfinite(lambda) || lambda < 10.0 * params.omega_bar)
            throw DomainError("divergence probe cutoffs must be >= 10 omega_bar");
        if (lambda <= prev) throw DomainError("divergence probe cutoffs must be increasing");
        prev = lambda;
    }

    std::vector<double> values;
    values.reserve(cutoffs.size());
    if (params.g == 0.0) {
        values.assign(cutoffs.size(), 0.0);
        return values;
    }

    const Envelope e = make_envelope(params, t);
    for (double lambda : cutoffs) {
        const auto r = split_kernel_integral(
            [&](double w) { return kernel_G_static(w, params, e, t); },
            [&](double w) { return kernel_G_osc(w, params, e, t); },
            lambda, t, params.omega_bar, spec);
        values.push_back(params.g / params.omega_bar * r.value);
    }
    return values;
}

namespace detail {

ComplexValue alpha0k_continuum(const PhysParams& params, double omega_k, double delta_omega,
                               double t) {
    params.validate();
    if (!(omega_k > 0.0) || !(delta_omega > 0.0))
        throw DomainError("alpha0k_continuum requires omega_k > 0 and delta_omega > 0");
    const Envelope e = make_envelope(params, t);
    const double wb = params.omega_bar;
    const ComplexValue den(omega_k * omega_k - wb * wb, e.pg * omega_k);
    const ComplexValue direct = std::sqrt(omega_k / (2.0 * wb)) * (wb + omega_k) *
                                std::sqrt(params.g * delta_omega) *
                                std::polar(1.0, -omega_k * t) / den;
    const ComplexValue em = std::polar(1.0, -e.kap * t);
    const ComplexValue num_m(2.0 * e.kap + 2.0 * wb, -e.pg);
    const ComplexValue den_m(2.0 * e.kap - 2.0 * omega_k, -e.pg);
    const ComplexValue num_p(2.0 * wb - 2.0 * e.kap, -e.pg);
    const ComplexValue den_p(2.0 * e.kap + 2.0 * omega_k, e.pg);
    const ComplexValue damped = std::sqrt(omega_k / wb) *
                                std::sqrt(2.0 * params.g * delta_omega) / (4.0 * e.kap) *
                                (num_m / den_m * em + num_p / den_p * std::conj(em)) * e.eh;
    return direct + damped;
}

ComplexValue beta0k_continuum(const PhysParams& params, double omega_k, double delta_omega,
                              double t) {
    params.validate();
    if (!(omega_k > 0.0) || !(delta_omega > 0.0))
        throw DomainError("beta0k_continuum requires omega_k > 0 and delta_omega > 0");
    const Envelope e = make_envelope(params, t);
    const double wb = params.omega_bar;
    const ComplexValue den(omega_k * omega_k - wb * wb, -e.pg * omega_k);
    const ComplexValue direct = std::sqrt(omega_k / (2.0 * wb)) * (omega_k - wb) *
                                std::sqrt(params.g * delta_omega) *
                                std::polar(1.0, omega_k * t) / den;
    const ComplexValue em = std::polar(1.0, -e.kap * t);
    const ComplexValue num_m(2.0 * wb + 2.0 * e.kap, -e.pg);
    const ComplexValue den_m(2.0 * e.kap + 2.0 * omega_k, -e.pg);
    const ComplexValue num_p(2.0 * wb - 2.0 * e.kap, -e.pg);
    const ComplexValue den_p(2.0 * e.kap - 2.0 * omega_k, e.pg);
    const ComplexValue damped = std::sqrt(omega_k / wb) *
                                std::sqrt(2.0 * params.g * delta_omega) / (4.0 * e.kap) *
                                (num_m / den_m * em + num_p / den_p * std::conj(em)) * e.eh;
    return direct - damped;
}

} // namespace detail

} // namespace oscbath
