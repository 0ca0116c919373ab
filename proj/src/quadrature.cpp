#include "oscbath/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace oscbath::quad {

namespace {

constexpr double pi = 3.14159265358979323846;

// 15-point Kronrod extension of the 7-point Gauss rule.  Abscissae for the
// positive half-axis; xgk[7] is the center.  Odd indices are the embedded
// Gauss nodes (weights wg[0..2], center weight wg[3]).
constexpr double xgk[8] = {
    0.99145537112081263920685469752633,
    0.94910791234275852452618968404785,
    0.86486442335976907278971278864093,
    0.74153118559939443986386477328079,
    0.58608723546769113029414483825873,
    0.40584515137739716690660641207696,
    0.20778495500789846760068940377324,
    0.0,
};
constexpr double wgk[8] = {
    0.02293532201052922496373200805897,
    0.06309209262997855329070066318854,
    0.10479001032225018383987632254152,
    0.14065325971552591874518959051024,
    0.16900472663926790282658342659855,
    0.19035057806478540991325640242101,
    0.20443294007529889241416199923466,
    0.20948214108472782801299917489171,
};
constexpr double wg[4] = {
    0.12948496616886969327061143267908,
    0.27970539148927666790146777142378,
    0.38183005050511894495036977548898,
    0.41795918367346938775510204081633,
};

struct Kahan {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

[[noreturn]] void throw_nonfinite(double x) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "integrand returned a non-finite value at x = %.17g", x);
    throw DomainError(buf);
}

double sample(const Fn& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw_nonfinite(x);
    return v;
}

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double err = 0.0;
    double resabs = 0.0;
    std::uint64_t id = 0;
};

// Refinement order: largest error first, insertion order breaking ties, so a
// given integrand always produces the same subdivision tree.
struct WorstFirst {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.err != y.err) return x.err < y.err;
        return x.id > y.id;
    }
};

struct Budget {
    int remaining = 0;
};

Panel gk15(const Fn& f, double a, double b, Budget& budget) {
    const double epmach = std::numeric_limits<double>::epsilon();
    const double uflow = std::numeric_limits<double>::min();

    budget.remaining -= 1;

    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);
    const double dhlgth = std::fabs(hlgth);

    double fv1[7];
    double fv2[7];
    const double fc = sample(f, centr);
    double resg = fc * wg[3];
    double resk = fc * wgk[7];
    double resabs = std::fabs(resk);
    for (int j = 0; j < 3; ++j) {
        const int jtw = 2 * j + 1;
        const double absc = hlgth * xgk[jtw];
        const double f1 = sample(f, centr - absc);
        const double f2 = sample(f, centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        const double fsum = f1 + f2;
        resg += wg[j] * fsum;
        resk += wgk[jtw] * fsum;
        resabs += wgk[jtw] * (std::fabs(f1) + std::fabs(f2));
    }
    for (int j = 0; j < 4; ++j) {
        const int jtwm1 = 2 * j;
        const double absc = hlgth * xgk[jtwm1];
        const double f1 = sample(f, centr - absc);
        const double f2 = sample(f, centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        const double fsum = f1 + f2;
        resk += wgk[jtwm1] * fsum;
        resabs += wgk[jtwm1] * (std::fabs(f1) + std::fabs(f2));
    }
    const double reskh = resk * 0.5;
    double resasc = wgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));

    Panel p;
    p.a = a;
    p.b = b;
    p.value = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    double abserr = std::fabs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0)
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    if (resabs > uflow / (50.0 * epmach))
        abserr = std::max(epmach * 50.0 * resabs, abserr);
    p.err = abserr;
    p.resabs = resabs;
    return p;
}

struct IntervalOutcome {
    double value = 0.0;
    double err = 0.0;
};

// Adaptive bisection driven by the panel heap.  Stops on tolerance, budget
// exhaustion, or when every remaining panel is too narrow to split.  The
// returned value is re-summed over position-sorted panels so the result does
// not depend on the heap's internal layout.
IntervalOutcome adapt(const Fn& f, double a, double b, double abs_tol, double rel_tol,
                      Budget& budget) {
    IntervalOutcome out;
    if (a == b) return out;
    if (budget.remaining <= 0) {
        out.err = std::numeric_limits<double>::infinity();
        return out;
    }

    std::uint64_t next_id = 0;
    std::priority_queue<Panel, std::vector<Panel>, WorstFirst> heap;
    std::vector<Panel> parked;

    const double epmach = std::numeric_limits<double>::epsilon();
    Panel first = gk15(f, a, b, budget);
    first.id = next_id++;
    double total_value = first.value;
    double total_err = first.err;
    double total_resabs = first.resabs;
    heap.push(first);

    while (budget.remaining >= 2 && !heap.empty()) {
        const double tol = std::max(abs_tol, rel_tol * std::fabs(total_value));
        if (total_err <= tol) break;
        // Every panel's estimate floors at 50 eps of its |f| mass, so once the
        // total sits at that floor further splitting cannot reduce it.
        if (total_err <= 100.0 * epmach * total_resabs) break;

        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a) || !(mid < worst.b)) {
            parked.push_back(worst);
            continue;
        }
        Panel left = gk15(f, worst.a, mid, budget);
        Panel right = gk15(f, mid, worst.b, budget);
        left.id = next_id++;
        right.id = next_id++;
        total_value += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        total_resabs += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
    }

    std::vector<Panel> all = std::move(parked);
    all.reserve(all.size() + heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) {
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    Kahan v;
    Kahan e;
    for (const Panel& p : all) {
        v.add(p.value);
        e.add(p.err);
    }
    out.value = v.sum;
    out.err = e.sum;
    return out;
}

// Pull the half-line onto (0, 1) with x = scale*u/(1-u).  Covers the whole
// domain, so no tail is discarded; integrands must decay at least as 1/x^2
// for the mapped integrand to stay bounded near u = 1.
IntervalOutcome adapt_mapped_tail(const Fn& f, double start, double scale, double abs_tol,
                                  double rel_tol, Budget& budget) {
    const Fn mapped = [&f, start, scale](double u) {
        const double om = 1.0 - u;
        const double x = start + scale * u / om;
        const double jac = scale / (om * om);
        return f(x) * jac;
    };
    return adapt(mapped, 0.0, 1.0, abs_tol, rel_tol, budget);
}

struct LobeOutcome {
    double value = 0.0;
    double err = 0.0;
    double tail_bound = 0.0;
    bool complete = false;
};

// Averaging triangle over the partial sums of an alternating tail.  Returns
// the apex and half the final averaging gap as its accuracy indicator.
void euler_apex(const std::vector<double>& tail_terms, double& apex, double& apex_err) {
    std::vector<double> w;
    w.reserve(tail_terms.size());
    double run = 0.0;
    for (double t : tail_terms) {
        run += t;
        w.push_back(run);
    }
    const std::size_t m = std::min<std::size_t>(16, w.size());
    w.erase(w.begin(), w.end() - static_cast<std::ptrdiff_t>(m));
    apex_err = 0.0;
    while (w.size() > 1) {
        if (w.size() == 2) apex_err = 0.5 * std::fabs(w[0] - w[1]);
        for (std::size_t i = 0; i + 1 < w.size(); ++i) w[i] = 0.5 * (w[i] + w[i + 1]);
        w.pop_back();
    }
    apex = w[0];
}

// Sum half-period lobes on the grid n*(pi/freq) starting at `start`.  With a
// finite upper bound every lobe is integrated directly.  On the open tail the
// lobe sequence is accelerated once it settles into alternating decay; if the
// lobes instead die below noise first, the remainder is reported as a tail
// bound.
LobeOutcome lobed_sum(const Fn& f, double start, double freq, std::optional<double> upper,
                      const QuadratureSpec& spec, Budget& budget) {
    LobeOutcome out;
    const double h = pi / freq;
    const double lobe_abs = spec.abs_tol / 64.0;
    const double lobe_rel = spec.rel_tol / 64.0;

    Kahan base_value;
    Kahan panel_err;

    double x = start;
    {
        const double k0 = std::floor(start / h);
        double first_edge = (k0 + 1.0) * h;
        if (first_edge - start > h * 1e-12 && (!upper || first_edge < *upper)) {
            const IntervalOutcome head = adapt(f, start, first_edge, lobe_abs, lobe_rel, budget);
            base_value.add(head.value);
            panel_err.add(head.err);
            x = first_edge;
        }
    }

    if (upper) {
        while (x < *upper && budget.remaining > 0) {
            const double next = std::min(x + h, *upper);
            const IntervalOutcome lobe = adapt(f, x, next, lobe_abs, lobe_rel, budget);
            base_value.add(lobe.value);
            panel_err.add(lobe.err);
            x = next;
        }
        out.value = base_value.sum;
        out.err = panel_err.sum + (x < *upper ? std::numeric_limits<double>::infinity() : 0.0);
        out.complete = x >= *upper;
        return out;
    }

    std::vector<double> lobes;
    double best_value = base_value.sum;
    double best_err = std::numeric_limits<double>::infinity();
    double prev_candidate = std::numeric_limits<double>::quiet_NaN();
    int stable = 0;

    while (budget.remaining > 0) {
        const IntervalOutcome lobe = adapt(f, x, x + h, lobe_abs, lobe_rel, budget);
        x += h;
        lobes.push_back(lobe.value);
        panel_err.add(lobe.err);

        const double vmag = std::fabs(lobe.value);
        if (lobes.size() >= 4 && vmag < spec.abs_tol * 1e-6) {
            Kahan direct = base_value;
            for (double v : lobes) direct.add(v);
            out.value = direct.sum;
            out.err = panel_err.sum + vmag;
            out.tail_bound = vmag;
            out.complete = true;
            return out;
        }

        if (lobes.size() < 12) continue;

        // Longest suffix with strict sign alternation and decaying magnitude.
        std::size_t j0 = lobes.size() - 1;
        while (j0 > 0) {
            const double cur = lobes[j0];
            const double prev = lobes[j0 - 1];
            const bool alternates = (cur > 0.0 && prev < 0.0) || (cur < 0.0 && prev > 0.0);
            if (!alternates || std::fabs(prev) <= std::fabs(cur)) break;
            --j0;
        }
        const std::size_t suffix = lobes.size() - j0;
        if (suffix < 8) continue;

        Kahan head = base_value;
        for (std::size_t i = 0; i < j0; ++i) head.add(lobes[i]);
        std::vector<double> tail(lobes.begin() + static_cast<std::ptrdiff_t>(j0), lobes.end());
        double apex = 0.0;
        double apex_err = 0.0;
        euler_apex(tail, apex, apex_err);
        const double candidate = head.sum + apex;

        if (std::isfinite(prev_candidate)) {
            const double step = std::fabs(candidate - prev_candidate);
            const double tol =
                0.25 * std::max(spec.abs_tol, spec.rel_tol * std::fabs(candidate));
            stable = step <= tol ? stable + 1 : 0;
            const double err_now = panel_err.sum + apex_err + step;
            if (err_now < best_err) {
                best_err = err_now;
                best_value = candidate;
            }
            if (stable >= 2) {
                out.value = candidate;
                out.err = err_now;
                out.complete = true;
                return out;
            }
        }
        prev_candidate = candidate;
    }

    if (std::isfinite(best_err)) {
        out.value = best_value;
        out.err = best_err;
    } else {
        Kahan direct = base_value;
        for (double v : lobes) direct.add(v);
        out.value = direct.sum;
        out.err = std::numeric_limits<double>::infinity();
    }
    return out;
}

[[noreturn]] void throw_nonconverged(const char* what, const QuadratureResult& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s did not converge: value = %.17g, error estimate = %.3g",
                  what, r.value, r.error_estimate);
    throw QuadratureError(buf);
}

QuadratureResult finish(const char* what, double value, double err, double tail,
                        const Budget& budget, const QuadratureSpec& spec) {
    QuadratureResult r;
    r.value = value;
    r.error_estimate = err;
    r.subdivisions_used = spec.max_subdivisions - budget.remaining;
    r.truncation_tail_bound = tail;
    if (!r.converged(spec)) throw_nonconverged(what, r);
    return r;
}

} // namespace

Truncation Truncation::fixed_upper(double omega_max) {
    Truncation t;
    t.kind = Kind::FixedUpper;
    t.omega_max = omega_max;
    return t;
}

Truncation Truncation::tail_bound(double scale) {
    Truncation t;
    t.kind = Kind::TailBound;
    t.scale = scale;
    return t;
}

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol))
        throw DomainError("abs_tol must be positive and finite");
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol))
        throw DomainError("rel_tol must be positive and finite");
    if (max_subdivisions < 16)
        throw DomainError("max_subdivisions must be at least 16");
    if (truncation.kind == Truncation::Kind::FixedUpper) {
        if (!(truncation.omega_max > 0.0) || !std::isfinite(truncation.omega_max))
            throw DomainError("FixedUpper truncation needs omega_max > 0");
    } else {
        if (!(truncation.scale > 0.0) || !std::isfinite(truncation.scale))
            throw DomainError("TailBound truncation needs scale > 0");
    }
    if (oscillation_period_hint &&
        (!(*oscillation_period_hint > 0.0) || !std::isfinite(*oscillation_period_hint)))
        throw DomainError("oscillation_period_hint must be positive when given");
}

bool QuadratureResult::converged(const QuadratureSpec& spec) const {
    return error_estimate <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(value));
}

QuadratureResult integrate_interval(const Fn& f, double a, double b,
                                    const QuadratureSpec& spec) {
    spec.validate();
    if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("interval endpoints must be finite with a <= b");
    Budget budget{spec.max_subdivisions};
    const IntervalOutcome o = adapt(f, a, b, spec.abs_tol, spec.rel_tol, budget);
    return finish("integrate_interval", o.value, o.err, 0.0, budget, spec);
}

QuadratureResult integrate_semi_infinite(const Fn& f, const QuadratureSpec& spec) {
    spec.validate();
    Budget budget{spec.max_subdivisions};
    if (spec.truncation.kind == Truncation::Kind::FixedUpper) {
        const IntervalOutcome o =
            adapt(f, 0.0, spec.truncation.omega_max, spec.abs_tol, spec.rel_tol, budget);
        return finish("integrate_semi_infinite", o.value, o.err, 0.0, budget, spec);
    }
    const IntervalOutcome o =
        adapt_mapped_tail(f, 0.0, spec.truncation.scale, spec.abs_tol, spec.rel_tol, budget);
    return finish("integrate_semi_infinite", o.value, o.err, 0.0, budget, spec);
}

QuadratureResult integrate_principal_value(const Fn& f, double pole,
                                           const QuadratureSpec& spec) {
    spec.validate();
    if (!(pole > 0.0) || !std::isfinite(pole))
        throw DomainError("principal-value pole must lie inside (0, inf)");

    const bool fixed = spec.truncation.kind == Truncation::Kind::FixedUpper;
    const double upper = fixed ? spec.truncation.omega_max : 0.0;
    if (fixed && pole == upper)
        throw DomainError("principal-value pole sits on the truncation boundary");

    Budget budget{spec.max_subdivisions};

    if (fixed && pole > upper) {
        const IntervalOutcome o = adapt(f, 0.0, upper, spec.abs_tol, spec.rel_tol, budget);
        return finish("integrate_principal_value", o.value, o.err, 0.0, budget, spec);
    }

    const double delta = fixed ? std::min(pole, upper - pole) : pole;

    // Order probe: for a simple pole the symmetric sums f(p+h)+f(p-h) stay
    // bounded (even-order ratio ~ 1/4 per halving) and the scaled differences
    // h*(f(p+h)-f(p-h))/2 approach the residue (odd-order ratio ~ 1).  Both
    // ratios are checked at two consecutive halvings so a single accidental
    // cancellation cannot masquerade as a higher-order pole.
    {
        const double h0 = delta / 16.0;
        double fp[3];
        double fm[3];
        for (int i = 0; i < 3; ++i) {
            const double h = h0 / static_cast<double>(1 << i);
            fp[i] = sample(f, pole + h);
            fm[i] = sample(f, pole - h);
        }
        bool even_bad = true;
        bool odd_bad = true;
        for (int i = 0; i < 2; ++i) {
            const double mag_a = std::fabs(fp[i]) + std::fabs(fm[i]);
            const double mag_b = std::fabs(fp[i + 1]) + std::fabs(fm[i + 1]);
            const double sum_a = fp[i] + fm[i];
            const double sum_b = fp[i + 1] + fm[i + 1];
            if (std::fabs(sum_a) <= 1e-12 * mag_a || std::fabs(sum_b) <= 1e-12 * mag_b ||
                std::fabs(sum_b) <= 3.0 * std::fabs(sum_a))
                even_bad = false;
            const double ha = h0 / static_cast<double>(1 << i);
            const double m_a = ha * (fp[i] - fm[i]) * 0.5;
            const double m_b = 0.5 * ha * (fp[i + 1] - fm[i + 1]) * 0.5;
            if (std::fabs(m_a) <= 1e-10 * ha * mag_a || std::fabs(m_b) <= 1e-10 * ha * mag_b ||
                std::fabs(m_b) <= 3.0 * std::fabs(m_a))
                odd_bad = false;
        }
        if (even_bad || odd_bad)
            throw PoleOrderError(
                "integrand fails the simple-pole order probe; principal value undefined");
    }

    // The pieces below largely cancel, so each refines against a pure
    // absolute share of the requested tolerance; piece-relative stopping
    // would quit while the cancelled total is still inaccurate.
    const double piece_abs = spec.abs_tol / 4.0;
    const double piece_rel = 0.0;

    // Window [pole-delta, pole+delta] folded about the pole: the 1/(x-pole)
    // parts cancel identically, leaving a bounded integrand in s.
    const Fn folded = [&f, pole](double s) { return f(pole + s) + f(pole - s); };
    const IntervalOutcome win = adapt(folded, 0.0, delta, piece_abs, piece_rel, budget);

    Kahan value;
    Kahan err;
    value.add(win.value);
    err.add(win.err);

    const double left_end = pole - delta;
    if (left_end > 0.0) {
        const IntervalOutcome o = adapt(f, 0.0, left_end, piece_abs, piece_rel, budget);
        value.add(o.value);
        err.add(o.err);
    }

    const double right_start = pole + delta;
    double tail_bound = 0.0;
    if (fixed) {
        if (right_start < upper) {
            const IntervalOutcome o = adapt(f, right_start, upper, piece_abs, piece_rel, budget);
            value.add(o.value);
            err.add(o.err);
        }
    } else if (spec.oscillation_period_hint) {
        const double freq = pi / *spec.oscillation_period_hint;
        QuadratureSpec tail_spec = spec;
        tail_spec.abs_tol = piece_abs;
        tail_spec.rel_tol = 1e-16;
        const LobeOutcome o = lobed_sum(f, right_start, freq, std::nullopt, tail_spec, budget);
        value.add(o.value);
        err.add(o.err);
        tail_bound = o.tail_bound;
    } else {
        const IntervalOutcome o = adapt_mapped_tail(f, right_start, spec.truncation.scale,
                                                    piece_abs, piece_rel, budget);
        value.add(o.value);
        err.add(o.err);
    }

    return finish("integrate_principal_value", value.sum, err.sum, tail_bound, budget, spec);
}

QuadratureResult integrate_oscillatory(const Fn& f, double frequency,
                                       const QuadratureSpec& spec) {
    spec.validate();
    if (!(frequency > 1e-12)) return integrate_semi_infinite(f, spec);

    Budget budget{spec.max_subdivisions};
    std::optional<double> upper;
    if (spec.truncation.kind == Truncation::Kind::FixedUpper)
        upper = spec.truncation.omega_max;
    const LobeOutcome o = lobed_sum(f, 0.0, frequency, upper, spec, budget);
    return finish("integrate_oscillatory", o.value, o.err, o.tail_bound, budget, spec);
}

} // namespace oscbath::quad
