#include <catch2/catch_amalgamated.hpp>

#include "hybridsim/potentials.hpp"
#include "test_helpers.hpp"

using namespace hybridsim;
using namespace hybridsim::potentials;
using Catch::Matchers::WithinRel;

namespace {
const double kE = constants::elementary_charge;
}

TEST_CASE("coulomb curvature and the unit-coupling voltage") {
    // q from V=90 V on a 100 nm sphere; curvature should sit within 10% of
    // the Be+ trap curvature at 2pi x 70 MHz and d = 10 um.
    const double r_tip = 100e-9;
    const double q = 4.0 * constants::pi * constants::epsilon_0 * r_tip * 90.0;
    const auto pot = CouplingPotential::coulomb(kE, q);
    const double d = 10e-6;
    const double upp = pot.derivative(2, d);
    CHECK_THAT(upp, WithinRel(kE * q / (2.0 * constants::pi * constants::epsilon_0 * d * d * d),
                              1e-12));
    const auto be = testutil::be9_ion();
    const double w = hz_to_angular(70e6);
    const double eps = upp / (be.mass * w * w);
    CHECK(std::abs(eps - 1.0) <= 0.10);

    // Zero tip charge: every derivative vanishes.
    const auto zero = CouplingPotential::coulomb(kE, 0.0);
    for (int n = 0; n <= 4; ++n) CHECK(zero.derivative(n, d) == 0.0);

    CHECK_THROWS_AS(pot.derivative(1, -1e-6), PhysicsError);
    CHECK_THROWS_AS(pot.derivative(2, 1e-9), PhysicsError); // below valid range
    CHECK_THROWS_AS(pot.derivative(5, d), PhysicsError);
}

TEST_CASE("casimir-polder curvature matches the closed form") {
    const double c4 = testutil::kC4Rb87;
    const auto pot = CouplingPotential::casimir_polder(c4);
    const double d = 1.5e-6;
    CHECK_THAT(pot.derivative(2, d), WithinRel(-20.0 * c4 / std::pow(d, 6), 1e-12));

    // |eps| = 20 beta C4/(m w^2 d^6) for the scaled potential.
    const auto rb = testutil::rb87();
    const double w = hz_to_angular(10e3);
    const double beta = 200.0;
    const auto scaled = CouplingPotential::scaled_casimir_polder(c4, beta);
    const double eps_mag = -scaled.derivative(2, d) / (rb.mass * w * w);
    CHECK_THAT(eps_mag, WithinRel(20.0 * beta * c4 / (rb.mass * w * w * std::pow(d, 6)), 1e-12));

    CHECK_THROWS_AS(CouplingPotential::casimir_polder(-1e-55), PhysicsError);
    CHECK_THROWS_AS(CouplingPotential::scaled_casimir_polder(c4, 0.0), PhysicsError);
}

TEST_CASE("charged tip delegates to the power-law kernel") {
    const auto rb = testutil::rb87();
    const double q = 20.0 * kE;
    const auto tip = CouplingPotential::charged_tip_polarization(rb.static_polarizability, q);
    const double c4_eff =
        CouplingPotential::charged_tip_effective_c4(rb.static_polarizability, q);
    const auto cp = CouplingPotential::casimir_polder(c4_eff);
    for (int n = 0; n <= 4; ++n)
        for (double d : {50e-9, 300e-9, 2e-6})
            CHECK(tip.derivative(n, d) == cp.derivative(n, d));

    // Effective beta against the bulk-conductor coefficient is plain arithmetic.
    CHECK_THAT(c4_eff / testutil::kC4Rb87,
               WithinRel(0.5 * rb.static_polarizability *
                             std::pow(q / (4 * constants::pi * constants::epsilon_0), 2) /
                             testutil::kC4Rb87,
                         1e-14));

    const auto zero = CouplingPotential::charged_tip_polarization(rb.static_polarizability, 0.0);
    for (int n = 0; n <= 4; ++n) CHECK(zero.derivative(n, 1e-6) == 0.0);
}

TEST_CASE("derivatives agree with central finite differences") {
    const auto rb = testutil::rb87();
    const std::vector<CouplingPotential> kinds = {
        CouplingPotential::coulomb(kE, 5.0 * kE),
        CouplingPotential::casimir_polder(testutil::kC4Rb87),
        CouplingPotential::scaled_casimir_polder(testutil::kC4Rb87, 200.0),
        CouplingPotential::charged_tip_polarization(rb.static_polarizability, 10.0 * kE),
        CouplingPotential::magnetic_dipole_pair(1.4e-15, 9.3e-24),
        CouplingPotential::custom_power_law(3e-40, 2.0),
    };
    for (const auto& pot : kinds) {
        for (double d : {100e-9, 1e-6, 20e-6}) {
            const double h = 1e-4 * d;
            for (int n = 1; n <= 4; ++n) {
                const double fd =
                    (pot.derivative(n - 1, d + h) - pot.derivative(n - 1, d - h)) / (2.0 * h);
                const double an = pot.derivative(n, d);
                CHECK_THAT(an, WithinRel(fd, 1e-6));
            }
        }
    }
}

TEST_CASE("power-law homogeneity and coefficient linearity") {
    const double c4 = testutil::kC4Rb87;
    const auto cp = CouplingPotential::casimir_polder(c4);
    for (double d : {40e-9, 800e-9, 10e-6}) {
        // U(lambda d) = lambda^-p U(d); derivatives gain a factor per order.
        for (int n = 0; n <= 4; ++n) {
            CHECK_THAT(cp.derivative(n, 2.0 * d),
                       WithinRel(cp.derivative(n, d) / std::pow(2.0, 4 + n), 1e-12));
        }
    }
    const double beta = 37.5;
    const auto scaled = CouplingPotential::scaled_casimir_polder(c4, beta);
    for (int n = 0; n <= 4; ++n)
        CHECK_THAT(scaled.derivative(n, 1e-6), WithinRel(beta * cp.derivative(n, 1e-6), 1e-14));
}

TEST_CASE("magnetic dipole gradient") {
    CHECK(magnetic_dipole_gradient(0.0, 250e-9) == 0.0);
    const double g1 = magnetic_dipole_gradient(1.4e-15, 250e-9);
    CHECK_THAT(magnetic_dipole_gradient(1.4e-15, 500e-9), WithinRel(g1 / 16.0, 1e-12));
    // Co magnet (250 x 50 x 80) nm^3 at bulk magnetization 1.4e6 A/m, 250 nm
    // away: mu = M_s V = 1.4e-15 J/T, G_m = 3 mu0 mu / (4 pi d^4).
    CHECK_THAT(g1, WithinRel(107520.0000585313, 1e-10));
    CHECK_THROWS_AS(magnetic_dipole_gradient(1e-15, 0.0), PhysicsError);
}

TEST_CASE("serialization round trip") {
    const auto pot = CouplingPotential::scaled_casimir_polder(testutil::kC4Rb87, 200.0)
                         .with_valid_range(20e-9, 50e-6);
    const auto j = pot.to_json();
    const auto back = CouplingPotential::from_json(j);
    CHECK(back.kind() == pot.kind());
    CHECK(back.coefficient() == pot.coefficient());
    CHECK(back.power() == pot.power());
    CHECK(back.valid_min() == pot.valid_min());
    CHECK(back.valid_max() == pot.valid_max());
    CHECK_THROWS_AS(potential_kind_from_string("torsion"), SchemaError);
}
