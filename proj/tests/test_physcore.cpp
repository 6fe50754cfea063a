#include <catch2/catch_amalgamated.hpp>

#include "hybridsim/physcore.hpp"
#include "test_helpers.hpp"

using namespace hybridsim;
using namespace hybridsim::physcore;
using Catch::Matchers::WithinRel;

TEST_CASE("zero-point amplitude") {
    // 15 um nanotube: reference value rounds the 0.145 nm result up to 0.2 nm.
    const double b_cnt = zero_point_amplitude(2e-20, hz_to_angular(20e3));
    CHECK_THAT(b_cnt, WithinRel(1.4484488147711316e-10, 1e-12));
    CHECK(std::abs(b_cnt - 0.2e-9) <= 0.4 * 0.2e-9);

    // SiN membrane, frozen against an independent high-precision evaluation.
    CHECK_THAT(zero_point_amplitude(8e-13, hz_to_angular(0.9e6)),
               WithinRel(3.4140265970876153e-15, 1e-12));

    // Quadrupling the mass at fixed frequency halves the amplitude.
    const double a1 = zero_point_amplitude(3e-20, 1e5);
    const double a2 = zero_point_amplitude(4 * 3e-20, 1e5);
    CHECK_THAT(a1 / a2, WithinRel(2.0, 1e-12));

    CHECK_THROWS_AS(zero_point_amplitude(0.0, 1.0), PhysicsError);
    CHECK_THROWS_AS(zero_point_amplitude(1.0, -1.0), PhysicsError);
}

TEST_CASE("thermal amplitude") {
    // Nanotube at room temperature vs the 4 um reference.
    const double b_th = thermal_amplitude(2e-20, hz_to_angular(20e3), 300.0);
    CHECK_THAT(b_th, WithinRel(3.6214075846961346e-06, 1e-12));
    CHECK(std::abs(b_th - 4e-6) <= 0.15 * 4e-6);

    // Cantilever at room temperature vs the 0.4 nm reference.
    const double a_th = thermal_amplitude(5e-12, hz_to_angular(10e3), 300.0);
    CHECK(std::abs(a_th - 0.4e-9) <= 0.15 * 0.4e-9);

    CHECK(thermal_amplitude(1e-20, 1e5, 0.0) == 0.0);
    CHECK_THROWS_AS(thermal_amplitude(1e-20, 1e5, -1.0), PhysicsError);
}

TEST_CASE("thermal occupation") {
    CHECK_THAT(thermal_occupation(hz_to_angular(0.9e6), 2.0),
               WithinRel(46303.598080210155, 1e-12));
    CHECK(thermal_occupation(1e5, 0.0) == 0.0);

    // The ~1e3 reference phonon number matches the 250 kHz single-atom
    // nanotube at 10 mK; the 20 kHz collective mode sits one decade higher.
    const double n_single = thermal_occupation(hz_to_angular(250e3), 0.01);
    CHECK(n_single > 1e3 / 3.5);
    CHECK(n_single < 1e3 * 3.5);
    const double n_coll = thermal_occupation(hz_to_angular(20e3), 0.01);
    CHECK(n_coll > 3e3);
    CHECK(n_coll < 3e4);
}

TEST_CASE("mechanical decoherence rate") {
    // 2pi x 0.84 MHz at 4 K / Q=1e5 vs the rounded 2pi x 1 MHz reference.
    CHECK(std::abs(angular_to_hz(mechanical_decoherence_rate(1e5, 4.0)) - 0.84e6) <= 0.2e6);
    // 2pi x 21 Hz at 10 mK / Q=1e7 vs the 2pi x 20 Hz reference.
    CHECK(std::abs(angular_to_hz(mechanical_decoherence_rate(1e7, 0.01)) - 21.0) <= 2.0);
    CHECK(mechanical_decoherence_rate(1e6, 0.0) == 0.0);
    CHECK_THROWS_AS(mechanical_decoherence_rate(0.0, 1.0), PhysicsError);
}

TEST_CASE("closed-form identities") {
    // a_zp^2 * 2 m w / hbar = 1 and a_th^2 / a_zp^2 = 2 n_th, exactly.
    const double masses[] = {1e-25, 5e-12, 2e-20};
    const double freqs[] = {hz_to_angular(100.0), hz_to_angular(10e3), hz_to_angular(2.8e6)};
    const double temps[] = {1e-3, 0.3, 77.0, 300.0};
    for (double m : masses)
        for (double w : freqs) {
            const double zp = zero_point_amplitude(m, w);
            CHECK_THAT(zp * zp * 2.0 * m * w / constants::hbar, WithinRel(1.0, 1e-14));
            for (double T : temps) {
                const double th = thermal_amplitude(m, w, T);
                const double n = thermal_occupation(w, T);
                CHECK_THAT(th * th / (zp * zp), WithinRel(2.0 * n, 1e-12));
            }
        }
}

TEST_CASE("monotonicity in each argument") {
    const double m0 = 1e-20, w0 = 1e5, t0 = 1.0, q0 = 1e6;
    double prev = zero_point_amplitude(m0, w0);
    for (double scale : {2.0, 5.0, 20.0}) {
        const double cur = zero_point_amplitude(m0 * scale, w0);
        CHECK(cur < prev);
        prev = cur;
    }
    prev = thermal_amplitude(m0, w0, t0);
    for (double scale : {2.0, 5.0, 20.0}) {
        const double cur = thermal_amplitude(m0, w0, t0 * scale);
        CHECK(cur > prev);
        prev = cur;
    }
    prev = thermal_occupation(w0, t0);
    for (double scale : {2.0, 5.0, 20.0}) {
        const double cur = thermal_occupation(w0 * scale, t0);
        CHECK(cur < prev);
        prev = cur;
    }
    prev = mechanical_decoherence_rate(q0, t0);
    for (double scale : {2.0, 5.0, 20.0}) {
        const double cur = mechanical_decoherence_rate(q0 * scale, t0);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("oscillator geometry to effective mass") {
    OscillatorGeometry geom;
    geom.length = 8e-6;
    geom.width = 0.3e-6;
    geom.thickness = 0.05e-6;
    geom.density = 2330.0;
    geom.mode_shape_factor = kModeShapeCantilever;
    const auto osc = OscillatorSpec::from_geometry("cant", geom, hz_to_angular(2.8e6), 1e7);
    CHECK_THAT(osc.effective_mass, WithinRel(0.243 * 2330.0 * 1.2e-19, 1e-12));
    CHECK(osc.mass_from_geometry);
}
