#include <algorithm>
#include <cmath>
#include <complex>

#include <catch2/catch_amalgamated.hpp>

#include "hybridsim/gpe.hpp"
#include "test_helpers.hpp"

using namespace hybridsim;
using namespace hybridsim::gpe;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Pure harmonic trap, no surface.
GpeConfig harmonic_config(double freq_hz, double n_atoms, double g1d, double half_width,
                          int points) {
    GpeConfig cfg;
    cfg.grid = {-half_width, half_width, points};
    cfg.atom = testutil::rb87();
    cfg.n_atoms = n_atoms;
    cfg.interaction_1d = g1d;
    cfg.potential.atom = cfg.atom;
    cfg.potential.bare_frequency = hz_to_angular(freq_hz);
    cfg.potential.bare_minimum = 0.0;
    cfg.potential.surface_position = -half_width * 4.0;
    cfg.timestep = 1e-6;
    return cfg;
}

// The experiment-like surface trap (beta = 200 at barrier 8 hbar omega).
GpeConfig surface_config(double omega_design, double n_atoms = 600.0,
                         double g1d = 2.0e-39, int points = 512) {
    const auto rb = testutil::rb87();
    const auto surface =
        potentials::CouplingPotential::scaled_casimir_polder(testutil::kC4Rb87, 200.0);
    trapscape::SweepConfig scfg(rb, surface, omega_design);
    const double d =
        trapscape::distance_for_barrier(scfg, 8.0 * constants::hbar * omega_design);
    GpeConfig cfg;
    cfg.grid = {0.15e-6, 4.0e-6, points};
    cfg.atom = rb;
    cfg.n_atoms = n_atoms;
    cfg.interaction_1d = g1d;
    cfg.potential = trapscape::retuned_trap(rb, surface, 0.0, d, omega_design);
    cfg.timestep = 1e-7;
    cfg.drive.omega = hz_to_angular(10e3);
    return cfg;
}

} // namespace

TEST_CASE("noninteracting harmonic ground state is the Gaussian") {
    auto cfg = harmonic_config(100.0, 1.0, 0.0, 15e-6, 512);
    Gpe1D solver(cfg);
    const auto gs = solver.ground_state();
    const double w = cfg.potential.bare_frequency;
    const double aho = std::sqrt(constants::hbar / (cfg.atom.mass * w));
    const auto& z = solver.grid_z();
    double l2 = 0.0;
    for (size_t i = 0; i < z.size(); ++i) {
        const double exact = std::pow(constants::pi * aho * aho, -0.25) *
                             std::exp(-z[i] * z[i] / (2.0 * aho * aho));
        l2 += std::norm(gs.psi[i] - Complex(exact, 0.0)) * solver.spacing();
    }
    CHECK(std::sqrt(l2) < 1e-3);
    CHECK_THAT(gs.chemical_potential, WithinRel(0.5 * constants::hbar * w, 1e-4));
}

TEST_CASE("Thomas-Fermi chemical potential in the strong-interaction regime") {
    const double g1d = 1.0e-38, n_atoms = 1e4, freq = 100.0;
    auto cfg = harmonic_config(freq, n_atoms, g1d, 25e-6, 4096);
    Gpe1D solver(cfg);
    const auto gs = solver.ground_state();
    const double w = cfg.potential.bare_frequency;
    // mu_TF from N g = (4/3) mu sqrt(2 mu / m w^2).
    const double mu_tf = std::pow(0.75 * n_atoms * g1d * std::sqrt(cfg.atom.mass / 2.0) * w,
                                  2.0 / 3.0);
    CHECK(mu_tf / (constants::hbar * w) > 50.0); // genuinely in the TF regime
    CHECK_THAT(gs.chemical_potential, WithinRel(mu_tf, 0.02));
}

TEST_CASE("norm and energy conservation without drive or absorber") {
    auto cfg = surface_config(hz_to_angular(10e3));
    Gpe1D solver(cfg);
    const auto gs = solver.ground_state();

    Gpe1D::EvolveOptions opt;
    opt.duration = 2e4 * cfg.timestep; // 2e4 steps
    opt.absorber_on = false;
    opt.record_energy = true;
    const auto res = solver.evolve(gs.psi, opt);
    CHECK_THAT(res.final_norm, WithinRel(cfg.n_atoms, 1e-6));
    double emin = res.energy.front(), emax = res.energy.front();
    for (double e : res.energy) {
        emin = std::min(emin, e);
        emax = std::max(emax, e);
    }
    CHECK((emax - emin) / std::abs(res.energy.front()) < 1e-5);

    // With the absorber on but no drive, the ground state stays put.
    Gpe1D::EvolveOptions opt2;
    opt2.duration = 5e-3;
    const auto res2 = solver.evolve(gs.psi, opt2);
    CHECK_THAT(res2.final_norm, WithinRel(cfg.n_atoms, 1e-5));
}

TEST_CASE("chemical potential sits below the barrier in the experiment trap") {
    auto cfg = surface_config(hz_to_angular(10.5e3));
    Gpe1D solver(cfg);
    const auto gs = solver.ground_state();
    const double v_min = cfg.potential.value(solver.analysis().equilibrium_distance);
    const double hw = constants::hbar * solver.analysis().effective_frequency;
    const double mu_rel = (gs.chemical_potential - v_min) / hw;
    CHECK(mu_rel > 0.0);
    CHECK(mu_rel < solver.analysis().barrier_over_hbar_omega);
}

TEST_CASE("zero drive produces zero contrast") {
    auto cfg = surface_config(hz_to_angular(10e3));
    Gpe1D solver(cfg);
    const auto gs = solver.ground_state();
    const double c = contrast(cfg, gs.psi, 0.0, 10e-3);
    CHECK(std::abs(c) < 1e-3);
}

TEST_CASE("linear response: c.o.m. amplitude proportional to the drive") {
    auto cfg = surface_config(hz_to_angular(10e3));
    Gpe1D solver(cfg);
    const auto gs = solver.ground_state();
    const double z_eq = solver.com_of(gs.psi);

    auto amplitude_for = [&](double b) {
        GpeConfig driven = cfg;
        driven.drive.amplitude = b;
        driven.drive.omega = hz_to_angular(10e3);
        Gpe1D s(driven);
        Gpe1D::EvolveOptions opt;
        opt.duration = 2.0e-3; // 20 cycles, far below saturation for tiny b
        opt.store_stride = 50;
        const auto res = s.evolve(gs.psi, opt);
        double peak = 0.0;
        for (double c : res.com) peak = std::max(peak, std::abs(c - z_eq));
        return peak;
    };

    const double a1 = amplitude_for(0.3e-9);
    const double a2 = amplitude_for(1.0e-9);
    const double a3 = amplitude_for(3.0e-9);
    CHECK_THAT(a2 / a1, WithinRel(1.0e-9 / 0.3e-9, 0.05));
    CHECK_THAT(a3 / a1, WithinRel(3.0e-9 / 0.3e-9, 0.05));
}

TEST_CASE("contrast grows monotonically with drive amplitude") {
    auto cfg = surface_config(hz_to_angular(10.5e3));
    const std::vector<double> grid = {5e-9, 20e-9, 60e-9};
    const auto rows = contrast_curve(cfg, grid, 12e-3);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].contrast >= 0.0);
    CHECK(rows[1].contrast >= rows[0].contrast);
    CHECK(rows[2].contrast >= rows[1].contrast);
    CHECK_THROWS_AS(contrast_curve(cfg, {2e-9, 1e-9}, 1e-3), PhysicsError);
}

TEST_CASE("deterministic evolution") {
    auto cfg = surface_config(hz_to_angular(10e3));
    cfg.drive.amplitude = 20e-9;
    Gpe1D solver(cfg);
    const auto gs = solver.ground_state();
    Gpe1D::EvolveOptions opt;
    opt.duration = 2e-3;
    const auto a = solver.evolve(gs.psi, opt);
    const auto b = solver.evolve(gs.psi, opt);
    REQUIRE(a.psi.size() == b.psi.size());
    for (size_t i = 0; i < a.psi.size(); ++i) CHECK(a.psi[i] == b.psi[i]);
    CHECK(a.final_norm == b.final_norm);
}

TEST_CASE("config validation guards") {
    auto cfg = surface_config(hz_to_angular(10e3));
    cfg.grid.points = 500; // not a power of two
    CHECK_THROWS_AS(Gpe1D(cfg), PhysicsError);

    auto cfg2 = surface_config(hz_to_angular(10e3));
    cfg2.grid.points = 32; // cannot resolve the barrier
    CHECK_THROWS_AS(Gpe1D(cfg2), PhysicsError);

    auto cfg3 = surface_config(hz_to_angular(10e3));
    cfg3.timestep = 0.0;
    CHECK_THROWS_AS(Gpe1D(cfg3), PhysicsError);
}

TEST_CASE("snapshot rows") {
    CHECK(snapshot_csv_header() == "z_m,density_per_m,re_psi,im_psi");
    const auto row = snapshot_csv_row(1.5e-6, Complex(1.0, -2.0));
    CHECK(row.find("1.5") != std::string::npos);
    CHECK(std::count(row.begin(), row.end(), ',') == 3);
}
