#include "oscbath/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include <Eigen/Dense>

namespace oscbath {

namespace {

constexpr double pi = 3.14159265358979323846;

struct Residual {
    double value = 0.0;
    double deriv = 0.0;
};

// Secular function and its derivative in one O(N) pass.  The derivative is
// also the normalization sum: (t_0^r)^2 = -2 Omega_r / phi'(Omega_r).
Residual secular_eval(double Omega, const CavityConfig& cav, const PhysParams& p) {
    const double eta = cav.eta(p);
    const double eta2 = eta * eta;
    const double O2 = Omega * Omega;
    double s = 0.0;
    double sd = 0.0;
    for (int k = cav.N; k >= 1; --k) {
        const double wk = cav.omega_k(k);
        const double d = wk * wk - O2;
        s += 1.0 / d;
        sd += wk * wk / (d * d);
    }
    Residual r;
    r.value = p.omega_bar * p.omega_bar - O2 - eta2 * O2 * s;
    r.deriv = -2.0 * Omega * (1.0 + eta2 * sd);
    return r;
}

Residual cotangent_eval(double Omega, const CavityConfig& cav, const PhysParams& p) {
    const double x = cav.R * Omega / cav.c;
    const double s = std::sin(x);
    const double cot = std::cos(x) / s;
    const double a = cav.c / cav.R - p.omega_bar * p.omega_bar / (pi * p.g);
    Residual r;
    r.value = cot - Omega / (pi * p.g) - a / Omega;
    r.deriv = -(cav.R / cav.c) * (1.0 + cot * cot) - 1.0 / (pi * p.g) + a / (Omega * Omega);
    return r;
}

// Root of a strictly decreasing function on [lo, hi] with f(lo) > 0 > f(hi):
// bisection to a narrow bracket, then Newton confined to it.  Residual floors
// set by cancellation are accepted once progress stalls; the bracket keeps
// the iterate correct to machine precision regardless.
double solve_decreasing(const std::function<Residual(double)>& eval, double lo, double hi,
                        double tol_resid) {
    for (int i = 0; i < 24; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo) || !(mid < hi)) break;
        if (eval(mid).value > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    double best_x = x;
    double best_v = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int i = 0; i < 76; ++i) {
        const Residual r = eval(x);
        const double av = std::fabs(r.value);
        if (av < best_v) {
            best_v = av;
            best_x = x;
            stalled = 0;
        } else if (++stalled >= 3) {
            break;
        }
        if (av <= tol_resid) return x;
        if (r.value > 0.0)
            lo = x;
        else
            hi = x;
        double xn = r.deriv != 0.0 ? x - r.value / r.deriv : 0.5 * (lo + hi);
        if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);
        if (xn == x) break;
        x = xn;
    }
    return best_x;
}

[[noreturn]] void throw_bracket(int r, double lo, double hi) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "no sign change for mode %d in (%.17g, %.17g)", r, lo, hi);
    throw BracketError(buf);
}

// Endpoint just inside a pole-bounded interval where the residual still has
// the expected sign; the offsets stay above the PoleError threshold.
double edge_toward_pole(const std::function<double(double)>& f, double pole, double inward,
                        bool want_positive, int mode_index) {
    for (double off : {1e-9, 1e-10, 1e-11, 1e-12}) {
        const double x = pole + inward * off * std::fabs(pole);
        const double v = f(x);
        if (want_positive ? v > 0.0 : v < 0.0) return x;
    }
    throw_bracket(mode_index, pole, pole);
}

void identity_basis(NormalModeBasis& basis) {
    const int n = basis.config.N;
    basis.Omegas.resize(n + 1);
    basis.t0.assign(n + 1, 0.0);
    basis.Omegas[0] = basis.params.omega_bar;
    basis.t0[0] = 1.0;
    for (int k = 1; k <= n; ++k) basis.Omegas[k] = basis.config.omega_k(k);
}

void solve_finite_secular(NormalModeBasis& basis) {
    const CavityConfig& cav = basis.config;
    const PhysParams& p = basis.params;
    const int n = cav.N;
    const double tol_resid = 1e-13 * p.omega_bar * p.omega_bar;
    const double eta2 = cav.eta(p) * cav.eta(p);

    const auto eval = [&](double x) { return secular_eval(x, cav, p); };
    const auto value = [&](double x) { return secular_eval(x, cav, p).value; };

    for (int r = 0; r <= n; ++r) {
        double lo;
        double hi;
        if (r == 0) {
            lo = 0.0;
            hi = edge_toward_pole(value, cav.omega_k(1), -1.0, false, r);
        } else if (r < n) {
            lo = edge_toward_pole(value, cav.omega_k(r), +1.0, true, r);
            hi = edge_toward_pole(value, cav.omega_k(r + 1), -1.0, false, r);
        } else {
            lo = edge_toward_pole(value, cav.omega_k(n), +1.0, true, r);
            const double wn = cav.omega_k(n);
            double span = n * eta2 / wn + p.omega_bar;
            hi = wn + span;
            int expansions = 0;
            while (value(hi) >= 0.0) {
                if (++expansions > 60) throw_bracket(r, wn, hi);
                span *= 2.0;
                hi = wn + span;
            }
        }
        basis.Omegas[r] = solve_decreasing(eval, lo, hi, tol_resid);
    }

    for (int r = 0; r <= n; ++r) {
        const double Om = basis.Omegas[r];
        if (!(Om * Om > 0.0)) throw StabilityError("non-positive squared eigenfrequency");
        // phi'(Omega_r) = -2 Omega_r (1 + eta^2 sum), so the normalization
        // sum is recovered from the derivative without a second pass.
        const Residual res = secular_eval(Om, cav, p);
        const double norm2 = -res.deriv / (2.0 * Om);
        basis.t0[r] = 1.0 / std::sqrt(norm2);
    }
}

void solve_cavity_cotangent(NormalModeBasis& basis) {
    const CavityConfig& cav = basis.config;
    const PhysParams& p = basis.params;
    const int n = cav.N;
    const double dw = cav.delta_omega();
    const double eta = cav.eta(p);
    const double eta2 = eta * eta;
    // The cotangent form flattens near its roots; its residual scale is set
    // by 1/(pi g) rather than omega_bar^2.
    const double tol_resid = 1e-13 * std::max(1.0, 1.0 / (pi * p.g));

    const auto eval = [&](double x) { return cotangent_eval(x, cav, p); };
    const auto value = [&](double x) { return cotangent_eval(x, cav, p).value; };

    for (int r = 0; r <= n; ++r) {
        const double pole_lo = r * dw;
        const double pole_hi = (r + 1) * dw;
        double lo;
        if (r == 0) {
            // The residual is finite at 0+ (the cotangent and 1/Omega poles
            // cancel), approaching omega_bar^2/(pi g) > 0.
            lo = 1e-9 * dw;
            if (!(value(lo) > 0.0)) throw_bracket(r, 0.0, dw);
        } else {
            lo = edge_toward_pole(value, pole_lo, +1.0, true, r);
        }
        const double hi = edge_toward_pole(value, pole_hi, -1.0, false, r);
        basis.Omegas[r] = solve_decreasing(eval, lo, hi, tol_resid);
    }

    double worst = 0.0;
    for (int r = 0; r <= n; ++r) {
        const double Om = basis.Omegas[r];
        const double O2 = Om * Om;
        const double w2 = p.omega_bar * p.omega_bar;
        const double rad = (O2 - w2) * (O2 - w2) + 0.5 * eta2 * (3.0 * O2 - w2) +
                           pi * pi * p.g * p.g * O2;
        if (!(rad > 0.0))
            throw DomainError("closed-form matrix element undefined at this eigenfrequency");
        const double t0_raw = eta * Om / std::sqrt(rad);
        double sum = 0.0;
        for (int k = n; k >= 1; --k) {
            const double wk = cav.omega_k(k);
            const double d = wk * wk - O2;
            sum += wk * wk / (d * d);
        }
        const double colnorm2 = t0_raw * t0_raw * (1.0 + eta2 * sum);
        worst = std::max(worst, std::fabs(colnorm2 - 1.0));
        basis.t0[r] = t0_raw / std::sqrt(colnorm2);
    }
    basis.pre_renormalization_defect = worst;
}

void solve_dense_oracle(NormalModeBasis& basis) {
    const CavityConfig& cav = basis.config;
    const PhysParams& p = basis.params;
    const int n = cav.N;
    if (n > 512) throw DomainError("DenseEigenOracle is capped at N <= 512");

    const double eta = cav.eta(p);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
    m(0, 0) = p.omega_bar * p.omega_bar + n * eta * eta;
    for (int k = 1; k <= n; ++k) {
        const double wk = cav.omega_k(k);
        m(k, k) = wk * wk;
        m(0, k) = -eta * wk;
        m(k, 0) = -eta * wk;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
        throw StabilityError("dense eigendecomposition failed to converge");

    basis.dense.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
    for (int r = 0; r <= n; ++r) {
        const double lambda = es.eigenvalues()(r);
        if (!(lambda > 0.0))
            throw StabilityError("non-positive squared eigenfrequency in dense oracle");
        basis.Omegas[r] = std::sqrt(lambda);
        const double sign = es.eigenvectors()(0, r) < 0.0 ? -1.0 : 1.0;
        for (int mu = 0; mu <= n; ++mu)
            basis.dense[static_cast<std::size_t>(mu) * (n + 1) + r] =
                sign * es.eigenvectors()(mu, r);
        basis.t0[r] = basis.dense[r];
    }
}

} // namespace

double NormalModeBasis::tk(int k, int r) const {
    if (params.g == 0.0) return k == r ? 1.0 : 0.0;
    if (method == SpectrumMethod::DenseEigenOracle)
        return dense[static_cast<std::size_t>(k) * Omegas.size() + r];
    const double wk = config.omega_k(k);
    const double d = wk * wk - Omegas[r] * Omegas[r];
    return config.eta(params) * wk * t0[r] / d;
}

double secular_residual_finite(double Omega, const CavityConfig& config,
                               const PhysParams& params) {
    config.validate();
    const double dw = config.delta_omega();
    const int k_near = static_cast<int>(std::lround(Omega / dw));
    if (k_near >= 1 && k_near <= config.N) {
        const double wk = k_near * dw;
        if (std::fabs(Omega - wk) <= 1e-14 * std::max(std::fabs(Omega), wk)) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "Omega = %.17g coincides with bath mode %d", Omega,
                          k_near);
            throw PoleError(buf);
        }
    }
    return secular_eval(Omega, config, params).value;
}

double cotangent_residual(double Omega, const CavityConfig& config,
                          const PhysParams& params) {
    config.validate();
    if (!(params.g > 0.0)) throw DomainError("cotangent residual requires g > 0");
    if (Omega < 0.0) throw DomainError("cotangent residual requires Omega >= 0");
    const double x = config.R * Omega / config.c;
    const double m = std::round(x / pi);
    if (std::fabs(x - m * pi) <= 1e-13 * std::max(1.0, x))
        throw PoleError("sin(R Omega / c) vanishes at this frequency");
    return cotangent_eval(Omega, config, params).value;
}

NormalModeBasis solve_spectrum(const CavityConfig& config, const PhysParams& params,
                               SpectrumMethod method) {
    if (!std::isfinite(params.omega_bar) || !(params.omega_bar * params.omega_bar > 0.0))
        throw StabilityError("omega_bar^2 <= 0: runaway regime has no oscillatory modes");
    config.validate();
    if (!(params.g >= 0.0) || !std::isfinite(params.g))
        throw DomainError("g must be nonnegative and finite");

    NormalModeBasis basis;
    basis.config = config;
    basis.params = params;
    basis.method = method;
    basis.Omegas.resize(config.N + 1);
    basis.t0.resize(config.N + 1);

    if (params.g == 0.0) {
        identity_basis(basis);
        return basis;
    }

    switch (method) {
    case SpectrumMethod::FiniteSecular:
        solve_finite_secular(basis);
        break;
    case SpectrumMethod::CavityCotangent:
        solve_cavity_cotangent(basis);
        break;
    case SpectrumMethod::DenseEigenOracle:
        solve_dense_oracle(basis);
        break;
    }
    return basis;
}

double orthonormality_defect(const NormalModeBasis& basis) {
    const int m = basis.modes();
    std::vector<double> t(static_cast<std::size_t>(m) * m);
    for (int r = 0; r < m; ++r) t[r] = basis.t0[r];
    for (int mu = 1; mu < m; ++mu)
        for (int r = 0; r < m; ++r)
            t[static_cast<std::size_t>(mu) * m + r] = basis.tk(mu, r);

    double defect = 0.0;
    for (int mu = 0; mu < m; ++mu) {
        const double* row_mu = t.data() + static_cast<std::size_t>(mu) * m;
        for (int nu = 0; nu <= mu; ++nu) {
            const double* row_nu = t.data() + static_cast<std::size_t>(nu) * m;
            double s = 0.0;
            for (int r = 0; r < m; ++r) s += row_mu[r] * row_nu[r];
            const double target = mu == nu ? 1.0 : 0.0;
            defect = std::max(defect, std::fabs(s - target));
        }
    }
    return defect;
}

double cotangent_sum_identity(double u, long long terms) {
    if (u == std::round(u)) throw PoleError("cotangent sum identity undefined at integer u");
    if (terms < 1) throw DomainError("cotangent sum identity needs terms >= 1");
    const double u2 = u * u;
    double sum = 0.0;
    for (long long k = terms; k >= 1; --k) {
        const double kk = static_cast<double>(k);
        sum += 1.0 / (kk * kk - u2);
    }
    return sum;
}

} // namespace oscbath
