#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oscbath/model.hpp"

using namespace oscbath;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("kappa matches its defining radical in the weak regime") {
    PhysParams p;
    p.omega_bar = 1.0;
    p.g = 0.1;
    CHECK(kappa(p) == doctest::Approx(std::sqrt(1.0 - pi * pi * 0.01 / 4.0)).epsilon(1e-15));
    CHECK(kappa(p) == doctest::Approx(0.9875859400564979).epsilon(1e-12));

    p.g = 0.0;
    CHECK(kappa(p) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("kappa rejects the strong regime, coupling_regime classifies it") {
    PhysParams p;
    p.omega_bar = 1.0;

    p.g = 2.0 / pi;
    CHECK_THROWS_AS(kappa(p), StrongCouplingError);
    CHECK(coupling_regime(p) == CouplingRegime::Strong);

    p.g = 2.0 / pi - 1e-9;
    CHECK_NOTHROW(kappa(p));
    CHECK(coupling_regime(p) == CouplingRegime::Weak);

    p.g = 1.0;
    CHECK(coupling_regime(p) == CouplingRegime::Strong);
}

TEST_CASE("bose_occupation reproduces 1/(e^{beta omega} - 1)") {
    CHECK(bose_occupation(1.0, 2.0) ==
          doctest::Approx(1.0 / (std::exp(2.0) - 1.0)).epsilon(1e-14));
    CHECK(bose_occupation(1.0, 2.0) == doctest::Approx(0.15651764274966565).epsilon(1e-12));
    CHECK(bose_occupation(0.5, 2.0) == doctest::Approx(0.58197670686932642).epsilon(1e-12));

    // High-temperature expansion n = 1/(beta omega) - 1/2 + O(beta omega).
    const double n = bose_occupation(1e-9, 1.0);
    CHECK(n == doctest::Approx(1e9 - 0.5).epsilon(1e-12));

    // Deep quantum limit underflows cleanly to zero occupation.
    CHECK(bose_occupation(1000.0, 2.0) == 0.0);

    CHECK_THROWS_AS(bose_occupation(0.0, 2.0), DomainError);
    CHECK_THROWS_AS(bose_occupation(-1.0, 2.0), DomainError);
    CHECK_THROWS_AS(bose_occupation(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(bose_occupation(1.0, -2.0), DomainError);
}

TEST_CASE("w_continuum boundary values and branch handling") {
    PhysParams p;
    p.omega_bar = 1.0;
    p.g = 0.1;

    SUBCASE("upper half plane sample") {
        const ComplexValue w = w_continuum(ComplexValue(0.0, 1.0), p);
        CHECK(w.real() == doctest::Approx(-2.0 - 0.1 * pi).epsilon(1e-15));
        CHECK(w.imag() == doctest::Approx(0.0));
        CHECK(w.real() == doctest::Approx(-2.3141592653589793).epsilon(1e-14));
    }

    SUBCASE("lower half plane flips the damping sign") {
        const ComplexValue up = w_continuum(ComplexValue(0.3, 0.2), p);
        const ComplexValue dn = w_continuum(ComplexValue(0.3, -0.2), p);
        CHECK(dn.real() == doctest::Approx(std::conj(up).real()).epsilon(1e-15));
        CHECK(dn.imag() == doctest::Approx(std::conj(up).imag()).epsilon(1e-15));
    }

    SUBCASE("real axis needs an explicit side") {
        CHECK_THROWS_AS(w_continuum(ComplexValue(2.0, 0.0), p), AmbiguousBranchError);

        for (double alpha : {0.25, 1.0, 3.5}) {
            const ComplexValue up = w_continuum(alpha, BranchSide::Upper, p);
            const ComplexValue dn = w_continuum(alpha, BranchSide::Lower, p);
            CHECK(up.real() == doctest::Approx(alpha * alpha - 1.0).epsilon(1e-15));
            CHECK(up.imag() == doctest::Approx(pi * 0.1 * alpha).epsilon(1e-15));
            CHECK(dn.real() == doctest::Approx(up.real()).epsilon(1e-15));
            CHECK(dn.imag() == doctest::Approx(-up.imag()).epsilon(1e-15));
        }
    }
}

TEST_CASE("parameter validation rejects unphysical values") {
    PhysParams p;
    CHECK_NOTHROW(p.validate());

    p.omega_bar = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p.omega_bar = -1.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p.omega_bar = 1.0;

    p.g = -0.1;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p.g = 0.0;
    CHECK_NOTHROW(p.validate());
    p.g = 0.1;

    p.beta = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p.beta = 2.0;

    p.n0_init = -0.5;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p.n0_init = 0.0;
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("cavity geometry: mode ladder and coupling") {
    CavityConfig cav;
    cav.R = 40.0 * pi;
    cav.c = 1.0;
    cav.N = 128;
    CHECK_NOTHROW(cav.validate());

    CHECK(cav.delta_omega() == doctest::Approx(0.025).epsilon(1e-15));
    CHECK(cav.omega_k(1) == doctest::Approx(0.025).epsilon(1e-15));
    CHECK(cav.omega_k(128) == doctest::Approx(3.2).epsilon(1e-15));

    PhysParams p;
    p.g = 0.1;
    CHECK(cav.eta(p) == doctest::Approx(std::sqrt(2.0 * 0.1 * 0.025)).epsilon(1e-15));

    // g = eta^2 / (2 delta_omega) round-trips.
    const double eta = cav.eta(p);
    CHECK(eta * eta / (2.0 * cav.delta_omega()) == doctest::Approx(p.g).epsilon(1e-14));

    cav.R = 0.0;
    CHECK_THROWS_AS(cav.validate(), DomainError);
    cav.R = 1.0;
    cav.c = -1.0;
    CHECK_THROWS_AS(cav.validate(), DomainError);
    cav.c = 1.0;
    cav.N = 0;
    CHECK_THROWS_AS(cav.validate(), DomainError);
}
