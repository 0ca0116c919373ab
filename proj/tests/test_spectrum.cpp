#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oscbath/spectrum.hpp"

using namespace oscbath;

namespace {

constexpr double pi = 3.14159265358979323846;

PhysParams params(double omega_bar = 1.0, double g = 0.1) {
    PhysParams p;
    p.omega_bar = omega_bar;
    p.g = g;
    return p;
}

CavityConfig cavity(double R, int N) {
    CavityConfig c;
    c.R = R;
    c.c = 1.0;
    c.N = N;
    return c;
}

// Direct term-by-term evaluation, kept independent of the library routine.
double secular_brute(double Omega, const CavityConfig& cav, const PhysParams& p) {
    const double eta2 = 2.0 * p.g * cav.delta_omega();
    double sum = 0.0;
    for (int k = 1; k <= cav.N; ++k) {
        const double wk = k * cav.delta_omega();
        sum += 1.0 / (wk * wk - Omega * Omega);
    }
    return p.omega_bar * p.omega_bar - Omega * Omega - eta2 * Omega * Omega * sum;
}

} // namespace

TEST_CASE("secular residual: decoupled and zero-frequency limits") {
    // Ladder {2, 4, ...} keeps Omega = 1 clear of the bath poles.
    const auto cav = cavity(pi / 2.0, 8);
    CHECK(secular_residual_finite(1.0, cav, params(1.0, 0.0)) == 0.0);
    CHECK(secular_residual_finite(0.0, cav, params(1.0, 0.1)) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(secular_residual_finite(0.0, cav, params(1.7, 0.1)) ==
          doctest::Approx(1.7 * 1.7).epsilon(1e-15));
}

TEST_CASE("secular residual agrees with brute-force evaluation") {
    const auto cav = cavity(pi, 8);
    const auto p = params();
    for (double Om : {0.5, 1.37, 2.7}) {
        CHECK(secular_residual_finite(Om, cav, p) ==
              doctest::Approx(secular_brute(Om, cav, p)).epsilon(1e-14));
    }
    CHECK(secular_residual_finite(0.5, cav, p) ==
          doctest::Approx(0.655882352941176).epsilon(1e-13));
    CHECK(secular_residual_finite(1.37, cav, p) ==
          doctest::Approx(-0.746152641639184).epsilon(1e-13));
    CHECK(secular_residual_finite(2.7, cav, p) ==
          doctest::Approx(-6.82884324840441).epsilon(1e-13));
}

TEST_CASE("secular residual diverges with opposite signs across a bath pole") {
    const auto cav = cavity(pi, 8);
    const auto p = params();
    const double w1 = cav.omega_k(1);
    CHECK(secular_residual_finite(w1 * (1.0 - 1e-6), cav, p) < -1e3);
    CHECK(secular_residual_finite(w1 * (1.0 + 1e-6), cav, p) > 1e3);
}

TEST_CASE("secular residual raises PoleError on bath frequencies") {
    const auto cav = cavity(pi, 8);
    const auto p = params();
    const double w3 = cav.omega_k(3);
    CHECK_THROWS_AS(secular_residual_finite(w3, cav, p), PoleError);
    CHECK_THROWS_AS(secular_residual_finite(w3 * (1.0 + 1e-15), cav, p), PoleError);
    CHECK_NOTHROW(secular_residual_finite(w3 * (1.0 + 1e-13), cav, p));
}

TEST_CASE("cotangent residual: pole and domain guards") {
    const auto cav = cavity(pi, 8);
    const auto p = params();
    CHECK_THROWS_AS(cotangent_residual(2.0, cav, p), PoleError);
    CHECK_THROWS_AS(cotangent_residual(0.0, cav, p), PoleError);
    CHECK_THROWS_AS(cotangent_residual(-0.5, cav, p), DomainError);
    CHECK_THROWS_AS(cotangent_residual(0.5, cav, params(1.0, 0.0)), DomainError);
    CHECK_NOTHROW(cotangent_residual(0.5, cav, p));
}

TEST_CASE("cotangent residual: strong-coupling terms vanish as 1/g") {
    const auto cav = cavity(pi, 8);
    const double Om = 0.55;
    const double limit = std::cos(pi * Om) / std::sin(pi * Om) - 1.0 / (pi * Om);
    CHECK(std::fabs(cotangent_residual(Om, cav, params(1.0, 1e12)) - limit) < 2e-12);
}

TEST_CASE("finite secular spectrum reproduces frozen reference roots") {
    struct Case {
        int N;
        double g;
        std::vector<double> roots;
    };
    const std::vector<Case> cases = {
        {2, 0.1, {0.7917399716, 1.2205381659, 2.0696459608}},
        {3, 0.3, {0.6593928705, 1.3284055724, 2.1852891322, 3.1344937528}},
        {8,
         0.1,
         {0.7825442715, 1.2024385179, 2.0625998273, 3.0373321678, 4.026957555, 5.0212155812,
          6.0175506626, 7.0150177882, 8.0132189362}},
    };
    for (const auto& c : cases) {
        const auto basis =
            solve_spectrum(cavity(pi, c.N), params(1.0, c.g), SpectrumMethod::FiniteSecular);
        REQUIRE(basis.modes() == c.N + 1);
        for (int r = 0; r <= c.N; ++r)
            CHECK(basis.Omegas[r] == doctest::Approx(c.roots[r]).epsilon(2e-9));
    }
}

TEST_CASE("finite secular roots satisfy the residual and interlace the bath ladder") {
    const auto cav = cavity(40.0 * pi, 64);
    const auto p = params();
    const auto basis = solve_spectrum(cav, p, SpectrumMethod::FiniteSecular);

    const double w2 = p.omega_bar * p.omega_bar;
    for (int r = 0; r <= cav.N; ++r)
        CHECK(std::fabs(secular_brute(basis.Omegas[r], cav, p)) < 1e-12 * w2);

    CHECK(basis.Omegas[0] > 0.0);
    CHECK(basis.Omegas[0] < cav.omega_k(1));
    for (int r = 1; r < cav.N; ++r) {
        CHECK(basis.Omegas[r] > cav.omega_k(r));
        CHECK(basis.Omegas[r] < cav.omega_k(r + 1));
    }
    CHECK(basis.Omegas[cav.N] > cav.omega_k(cav.N));
    const double eta2 = 2.0 * p.g * cav.delta_omega();
    CHECK(basis.Omegas[cav.N] <
          cav.omega_k(cav.N) + cav.N * eta2 / cav.omega_k(cav.N) + p.omega_bar);
}

TEST_CASE("finite secular normalization matches the explicit sum") {
    const auto cav = cavity(10.0 * pi, 32);
    const auto p = params();
    const auto basis = solve_spectrum(cav, p, SpectrumMethod::FiniteSecular);
    const double eta2 = 2.0 * p.g * cav.delta_omega();
    for (int r = 0; r <= cav.N; ++r) {
        double sum = 0.0;
        for (int k = 1; k <= cav.N; ++k) {
            const double wk = cav.omega_k(k);
            const double d = wk * wk - basis.Omegas[r] * basis.Omegas[r];
            sum += wk * wk / (d * d);
        }
        const double norm2 = basis.t0[r] * basis.t0[r] * (1.0 + eta2 * sum);
        CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(basis.t0[r] > 0.0);
    }
}

TEST_CASE("finite secular agrees with the dense oracle") {
    SUBCASE("three coupled modes") {
        const auto cav = cavity(pi, 2);
        const auto fs = solve_spectrum(cav, params(), SpectrumMethod::FiniteSecular);
        const auto dn = solve_spectrum(cav, params(), SpectrumMethod::DenseEigenOracle);
        for (int r = 0; r <= 2; ++r)
            CHECK(std::fabs(fs.Omegas[r] - dn.Omegas[r]) < 1e-10);
    }
    SUBCASE("N = 64 eigenfrequencies and matrix elements") {
        const auto cav = cavity(40.0 * pi, 64);
        const auto fs = solve_spectrum(cav, params(), SpectrumMethod::FiniteSecular);
        const auto dn = solve_spectrum(cav, params(), SpectrumMethod::DenseEigenOracle);
        for (int r = 0; r <= 64; ++r) {
            CHECK(std::fabs(fs.Omegas[r] - dn.Omegas[r]) / dn.Omegas[r] < 1e-9);
            CHECK(std::fabs(fs.t0[r] - dn.t0[r]) < 1e-9);
        }
        for (int k : {1, 17, 64})
            for (int r : {0, 9, 64})
                CHECK(std::fabs(fs.tk(k, r) - dn.tk(k, r)) < 1e-9);
    }
}

TEST_CASE("orthonormality defect") {
    SUBCASE("finite secular construction stays orthonormal") {
        const auto basis =
            solve_spectrum(cavity(40.0 * pi, 64), params(), SpectrumMethod::FiniteSecular);
        CHECK(orthonormality_defect(basis) < 1e-10);
    }
    SUBCASE("dense oracle is orthonormal by construction") {
        const auto basis =
            solve_spectrum(cavity(40.0 * pi, 64), params(), SpectrumMethod::DenseEigenOracle);
        CHECK(orthonormality_defect(basis) < 1e-10);
    }
    SUBCASE("decoupled system is exactly the identity") {
        const auto basis =
            solve_spectrum(cavity(pi / 2.0, 3), params(1.0, 0.0), SpectrumMethod::FiniteSecular);
        CHECK(orthonormality_defect(basis) == 0.0);
    }
}

TEST_CASE("decoupled spectrum short-circuits to the bare ladder") {
    const auto cav = cavity(pi / 2.0, 3);
    const auto basis = solve_spectrum(cav, params(1.0, 0.0), SpectrumMethod::FiniteSecular);
    REQUIRE(basis.modes() == 4);
    CHECK(basis.Omegas[0] == 1.0);
    for (int k = 1; k <= 3; ++k) CHECK(basis.Omegas[k] == cav.omega_k(k));
    CHECK(basis.t0[0] == 1.0);
    for (int r = 1; r <= 3; ++r) CHECK(basis.t0[r] == 0.0);
    for (int k = 1; k <= 3; ++k)
        for (int r = 0; r <= 3; ++r) CHECK(basis.tk(k, r) == (k == r ? 1.0 : 0.0));
}

TEST_CASE("cavity cotangent spectrum") {
    SUBCASE("roots bracketed one per interval, frozen reference values") {
        const auto cav = cavity(10.0 * pi, 20);
        const auto p = params();
        const auto basis = solve_spectrum(cav, p, SpectrumMethod::CavityCotangent);
        const double dw = cav.delta_omega();
        for (int r = 0; r <= 20; ++r) {
            CHECK(basis.Omegas[r] > r * dw);
            CHECK(basis.Omegas[r] < (r + 1) * dw);
            CHECK(std::fabs(cotangent_residual(basis.Omegas[r], cav, p)) < 1e-10);
        }
        const double frozen[5] = {0.09899043915, 0.197921388937, 0.296721879017,
                                  0.39529341332, 0.49348183916};
        for (int r = 0; r < 5; ++r)
            CHECK(basis.Omegas[r] == doctest::Approx(frozen[r]).epsilon(1e-9));
    }
    SUBCASE("closed-form elements need only a small renormalization") {
        const auto basis =
            solve_spectrum(cavity(40.0 * pi, 128), params(), SpectrumMethod::CavityCotangent);
        CHECK(basis.pre_renormalization_defect ==
              doctest::Approx(0.00320107).epsilon(1e-4));
        // Columns are unit-normalized after the correction.
        const double eta2 = 2.0 * 0.1 * basis.config.delta_omega();
        for (int r : {0, 40, 128}) {
            double sum = 0.0;
            for (int k = 1; k <= 128; ++k) {
                const double wk = basis.config.omega_k(k);
                const double d = wk * wk - basis.Omegas[r] * basis.Omegas[r];
                sum += wk * wk / (d * d);
            }
            CHECK(basis.t0[r] * basis.t0[r] * (1.0 + eta2 * sum) ==
                  doctest::Approx(1.0).epsilon(1e-12));
        }
        MESSAGE("cavity cotangent pre-renormalization defect: "
                << basis.pre_renormalization_defect);
    }
}

TEST_CASE("spectrum error paths") {
    CHECK_THROWS_AS(solve_spectrum(cavity(pi, 2), params(0.0, 0.1),
                                   SpectrumMethod::FiniteSecular),
                    StabilityError);
    CHECK_THROWS_AS(solve_spectrum(cavity(pi, 513), params(),
                                   SpectrumMethod::DenseEigenOracle),
                    DomainError);
    CHECK_THROWS_AS(solve_spectrum(cavity(pi, 2), params(1.0, -0.1),
                                   SpectrumMethod::FiniteSecular),
                    DomainError);
}

TEST_CASE("cotangent sum identity") {
    // Telescoping oracle: sum_{k<=M} 1/(k^2 - 1/4) = 2 - 1/(M + 1/2).
    const long long m = 1000000;
    const double partial = cotangent_sum_identity(0.5, m);
    CHECK(partial == doctest::Approx(2.0 - 1.0 / (m + 0.5)).epsilon(1e-12));
    CHECK(std::fabs(partial - 2.0) < 2e-6);

    const double closed = 0.5 * (16.0 - 4.0 * pi / std::tan(pi * 0.25));
    CHECK(std::fabs(cotangent_sum_identity(0.25, m) - closed) < 1e-5);

    CHECK(std::fabs(cotangent_sum_identity(1e-4, m) - pi * pi / 6.0) < 2e-6);

    CHECK_THROWS_AS(cotangent_sum_identity(3.0, 10), PoleError);
    CHECK_THROWS_AS(cotangent_sum_identity(0.0, 10), PoleError);
    CHECK_THROWS_AS(cotangent_sum_identity(-2.0, 10), PoleError);
    CHECK_THROWS_AS(cotangent_sum_identity(0.5, 0), DomainError);
}

TEST_CASE("discrete particle weight converges to the continuum lorentzian") {
    // (t_0^r)^2 / delta Omega at the root nearest omega_bar, against
    // 2 g Omega^2 / ((Omega^2 - omega_bar^2)^2 + pi^2 g^2 Omega^2).
    // The leading deficit is the discrete weight itself: rel ~ (t_0^r)^2,
    // which shrinks linearly with the mode spacing.
    const double band = 20.0;
    const auto p = params();
    std::vector<double> rel;
    for (double R : {100.0, 400.0}) {
        const int n = static_cast<int>(std::ceil(band * R / pi));
        const auto basis = solve_spectrum(cavity(R, n), p, SpectrumMethod::FiniteSecular);
        int r_near = 0;
        for (int r = 0; r <= n; ++r)
            if (std::fabs(basis.Omegas[r] - 1.0) < std::fabs(basis.Omegas[r_near] - 1.0))
                r_near = r;
        const double Om = basis.Omegas[r_near];
        const double d1 = Om * Om - 1.0;
        const double lorentz = 2.0 * p.g * Om * Om / (d1 * d1 + pi * pi * p.g * p.g * Om * Om);
        const double weight = basis.t0[r_near] * basis.t0[r_near] / (pi / R);
        rel.push_back(std::fabs(weight - lorentz) / lorentz);
    }
    CHECK(rel[1] < 0.02);
    CHECK(rel[0] / rel[1] > 3.0);
    CHECK(rel[0] / rel[1] < 5.0);
}
