#ifndef HYBRIDSIM_SCHEMES_HPP
#define HYBRIDSIM_SCHEMES_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hybridsim/constants.hpp"
#include "hybridsim/coupling.hpp"
#include "hybridsim/errors.hpp"
#include "hybridsim/physcore.hpp"
#include "hybridsim/potentials.hpp"
#include "hybridsim/trapscape.hpp"
#include "hybridsim/types.hpp"

// Scheme calculators binding the generic engine to the concrete proposals:
// ion-Coulomb, BEC-surface, carbon nanotube, optical-lattice, and magnetic
// spin coupling, plus the cavity reference record. Every coupling rate is
// assembled by module `coupling`; schemes only prepare inputs.
namespace hybridsim::schemes {

// --- Ion - charged tip ---------------------------------------------------

struct IonSchemeParams {
    AtomSpecies ion;               // charge field must be set
    double trap_frequency = 0.0;   // rad/s, operating (deformation-compensated) value
    double distance = 0.0;         // m
    std::optional<double> tip_charge;      // C
    std::optional<double> voltage;         // V, with sphere_radius
    std::optional<double> sphere_radius;   // m
    std::optional<double> target_epsilon;  // solve the voltage for this
    double compensation_factor = 1.0;      // max distortion cancellation, >= 1
    OscillatorSpec oscillator;
    Environment environment;
    double atomic_decoherence = 0.0; // rad/s
};

struct IonSchemeResult {
    coupling::CouplingBudget budget;
    double required_voltage = 0.0;   // V for the realized epsilon
    double tip_charge = 0.0;         // C
    double delta_z_a = 0.0;          // m, |U_c'|/(m w^2), the trap-shift measure
    std::vector<std::string> warnings;
};

// Voltage producing a given epsilon at fixed geometry:
// V = eps * m w^2 d^3 / (2 r q_ion). Exactly linear in epsilon.
inline double ion_required_voltage(double epsilon, double ion_mass, double ion_charge,
                                   double omega, double d, double sphere_radius) {
    if (!(sphere_radius > 0.0)) throw PhysicsError("ion scheme: sphere_radius must be > 0");
    return epsilon * ion_mass * omega * omega * d * d * d /
           (2.0 * sphere_radius * ion_charge);
}

inline IonSchemeResult ion_budget(const IonSchemeParams& p) {
    IonSchemeResult out;
    p.ion.validate();
    if (p.ion.charge == 0.0) throw PhysicsError("ion scheme: species carries no charge");
    if (!(p.trap_frequency > 0.0)) throw PhysicsError("ion scheme: trap_frequency must be > 0");
    if (!(p.distance > 0.0)) throw PhysicsError("ion scheme: distance must be > 0");
    if (p.compensation_factor > 100.0)
        out.warnings.push_back("compensation_factor exceeds 1e2; beyond the compensation bound");

    const double m = p.ion.mass;
    const double w = p.trap_frequency;
    const double d = p.distance;

    double q = 0.0;
    if (p.target_epsilon) {
        if (!p.sphere_radius) throw PhysicsError("ion scheme: target_epsilon needs sphere_radius");
        out.required_voltage = ion_required_voltage(*p.target_epsilon, m, p.ion.charge, w, d,
                                                    *p.sphere_radius);
        q = 4.0 * constants::pi * constants::epsilon_0 * *p.sphere_radius * out.required_voltage;
    } else if (p.voltage) {
        if (!p.sphere_radius) throw PhysicsError("ion scheme: voltage needs sphere_radius");
        q = 4.0 * constants::pi * constants::epsilon_0 * *p.sphere_radius * *p.voltage;
        out.required_voltage = *p.voltage;
    } else if (p.tip_charge) {
        q = *p.tip_charge;
        if (p.sphere_radius)
            out.required_voltage = q / (4.0 * constants::pi * constants::epsilon_0 * *p.sphere_radius);
    } else {
        throw PhysicsError("ion scheme: provide tip_charge, voltage or target_epsilon");
    }
    out.tip_charge = q;

    const auto pot = potentials::CouplingPotential::coulomb(p.ion.charge, q);
    double eps = 0.0;
    double dza = 0.0;
    if (q != 0.0) {
        // Distortion measure and epsilon against the operating frequency;
        // static deformation up to compensation_factor is assumed cancelled
        // by the extra electrodes.
        const double upp = pot.derivative(2, d);
        const double up = pot.derivative(1, d);
        eps = upp / (m * w * w);
        dza = std::abs(up) / (m * w * w);
    }
    if (std::abs(eps) > 100.0)
        throw PhysicsError("ion scheme: epsilon beyond the compensation bound of 1e2");
    if (std::abs(eps) > p.compensation_factor * (1.0 + 1e-12))
        throw PhysicsError("ion scheme: epsilon exceeds the available compensation factor");

    out.delta_z_a = dza;
    out.budget = coupling::budget_from_epsilon(eps, m, 1, w, p.oscillator, p.environment,
                                               p.atomic_decoherence);
    return out;
}

// --- BEC - surface (cantilever / nanotube) -------------------------------

struct BecSurfaceParams {
    AtomSpecies atom;
    long n_atoms = 1;
    double omega_target = 0.0;     // rad/s, trap tuned resonant with the oscillator
    OscillatorSpec oscillator;
    double c4 = 0.0;               // J m^4, per (species, surface) pair; required
    double beta = 1.0;             // surface-potential strength relative to C4/d^4
    std::optional<double> distance;            // m; or solve from barrier target
    std::optional<double> barrier_hbar_omega;  // U0 in units of hbar*omega_target
    Environment environment;
    double atomic_decoherence = 0.0; // rad/s
    bool gravity_on = false;
    // Re-solve the bare trap per distance so the deformed frequency stays at
    // omega_target (the experimental procedure). With retune off the bare
    // trap is held at omega_target and close distances lose the minimum.
    bool retune = true;
};

struct BecSurfaceResult {
    coupling::CouplingBudget budget;
    trapscape::TrapAnalysis analysis;
    trapscape::CombinedPotential1D potential; // the solved trap, reusable downstream
};

inline BecSurfaceResult bec_surface_budget(const BecSurfaceParams& p) {
    if (!(p.c4 > 0.0)) throw PhysicsError("bec_surface: C4 is a required positive input");
    if (!(p.omega_target > 0.0)) throw PhysicsError("bec_surface: omega_target must be > 0");
    const auto surface = potentials::CouplingPotential::scaled_casimir_polder(p.c4, p.beta);
    trapscape::SweepConfig cfg(p.atom, surface, p.omega_target);
    cfg.gravity_on = p.gravity_on;

    double d = 0.0;
    if (p.distance) {
        d = *p.distance;
    } else if (p.barrier_hbar_omega) {
        d = trapscape::distance_for_barrier(
            cfg, *p.barrier_hbar_omega * constants::hbar * p.omega_target);
    } else {
        throw PhysicsError("bec_surface: provide distance or barrier target");
    }

    BecSurfaceResult out;
    if (p.retune) {
        out.potential = trapscape::retuned_trap(p.atom, surface, 0.0, d, p.omega_target,
                                                p.gravity_on);
    } else {
        out.potential.atom = p.atom;
        out.potential.bare_frequency = p.omega_target;
        out.potential.bare_minimum = d;
        out.potential.surface_position = 0.0;
        out.potential.surface_term = surface;
        out.potential.gravity_on = p.gravity_on;
    }
    out.analysis = trapscape::analyze(out.potential);
    if (out.analysis.vanished) {
        out.budget = coupling::CouplingBudget{};
        return out;
    }

    coupling::CoupledPair pair{
        p.atom, p.n_atoms,
        TrapSpec{out.potential.bare_frequency, out.potential.bare_minimum, TrapKind::magnetic},
        p.oscillator, surface, out.analysis.equilibrium_distance, p.environment,
        p.atomic_decoherence};
    out.budget = coupling::budget(pair);
    return out;
}

// Time-of-flight displacement of a coherent c.o.m. state |alpha| after
// release: sqrt(2 hbar w_a / m N) * alpha * t.
inline double tof_detection_amplitude(const AtomSpecies& atom, double n_atoms, double omega_a,
                                      double alpha, double t_tof) {
    if (!(n_atoms > 0.0) || !(omega_a > 0.0) || t_tof < 0.0 || alpha < 0.0)
        throw PhysicsError("tof_detection_amplitude: inputs must be positive");
    return std::sqrt(2.0 * constants::hbar * omega_a / (atom.mass * n_atoms)) * alpha * t_tof;
}

// --- Carbon nanotube variants --------------------------------------------

enum class CntVariant { cp, charged, current_carrying };

inline CntVariant cnt_variant_from_string(const std::string& s) {
    if (s == "cp") return CntVariant::cp;
    if (s == "charged") return CntVariant::charged;
    if (s == "current_carrying") return CntVariant::current_carrying;
    throw SchemaError("unknown cnt variant '" + s + "'");
}

struct CntSchemeParams {
    CntVariant variant = CntVariant::cp;
    AtomSpecies atom;
    long n_atoms = 1;
    double omega_target = 0.0;    // rad/s, resonant trap
    OscillatorSpec nanotube;
    double c4 = 0.0;              // bulk-conductor C4 for the species
    double cp_scale = 0.06;       // U_CP,CNT / U_CP
    std::optional<double> tube_charge;     // C, charged variant
    double barrier_hbar_omega = 8.0;
    Environment environment;
    double atomic_decoherence = 0.0;
};

struct CntSchemeResult {
    coupling::CouplingBudget budget;
    std::optional<trapscape::TrapAnalysis> analysis; // surface-force variants
    double effective_beta = 0.0;  // surface strength relative to bulk CP
    double gN_per_epsilon = 0.0;  // rad/s, collective rate per unit epsilon
};

inline CntSchemeResult cnt_budget(const CntSchemeParams& p) {
    CntSchemeResult out;
    const double g0_unit = coupling::g0_from_epsilon(1.0, p.omega_target, p.nanotube.frequency,
                                                     p.atom.mass, p.nanotube.effective_mass);
    out.gN_per_epsilon = std::sqrt(static_cast<double>(p.n_atoms)) * g0_unit;

    if (p.variant == CntVariant::current_carrying) {
        // The nanotube is the trapping wire: trap oscillations follow the
        // tube one to one.
        out.effective_beta = 0.0;
        out.budget = coupling::budget_from_epsilon(1.0, p.atom.mass, p.n_atoms, p.omega_target,
                                                   p.nanotube, p.environment,
                                                   p.atomic_decoherence);
        return out;
    }

    if (!(p.c4 > 0.0)) throw PhysicsError("cnt scheme: C4 is a required positive input");
    double beta = 0.0;
    if (p.variant == CntVariant::cp) {
        beta = p.cp_scale;
    } else {
        if (!p.tube_charge) throw PhysicsError("cnt scheme: charged variant needs tube_charge");
        const double c4_eff = potentials::CouplingPotential::charged_tip_effective_c4(
            p.atom.static_polarizability, *p.tube_charge);
        beta = c4_eff / p.c4;
    }
    out.effective_beta = beta;

    BecSurfaceParams bp;
    bp.atom = p.atom;
    bp.n_atoms = p.n_atoms;
    bp.omega_target = p.omega_target;
    bp.oscillator = p.nanotube;
    bp.c4 = p.c4;
    bp.beta = beta;
    bp.barrier_hbar_omega = p.barrier_hbar_omega;
    bp.environment = p.environment;
    bp.atomic_decoherence = p.atomic_decoherence;
    auto sub = bec_surface_budget(bp);
    out.analysis = sub.analysis;
    out.budget = sub.budget;
    return out;
}

// --- Optical lattice -----------------------------------------------------

struct LatticeSchemeParams {
    AtomSpecies atom;
    double wavevector = 0.0;     // 1/m
    double lattice_depth = 0.0;  // J
    OscillatorSpec membrane;
    long n_atoms = 1;
    double atom_cooling_rate = 0.0; // rad/s, gamma_a^cool
    Environment environment;
    double atomic_decoherence = 0.0; // rad/s, laser cooling off
};

// Trap frequency at the bottom of a lattice well, w_a = k sqrt(2 U0 / m).
inline double lattice_trap_frequency(const LatticeSchemeParams& p) {
    if (!(p.wavevector > 0.0) || !(p.lattice_depth > 0.0))
        throw PhysicsError("lattice scheme: wavevector and depth must be > 0");
    return p.wavevector * std::sqrt(2.0 * p.lattice_depth / p.atom.mass);
}

struct LatticeBudgetResult {
    coupling::CouplingBudget budget;
    double omega_a = 0.0; // rad/s
    double g_m = 0.0;     // rad/s, membrane-side coupling R * gN
};

// The standing wave rides the membrane: eps = 1 by construction.
inline LatticeBudgetResult lattice_budget(const LatticeSchemeParams& p) {
    LatticeBudgetResult out;
    out.omega_a = lattice_trap_frequency(p);
    out.budget = coupling::budget_from_epsilon(1.0, p.atom.mass, p.n_atoms, out.omega_a,
                                               p.membrane, p.environment,
                                               p.atomic_decoherence);
    out.g_m = p.membrane.power_reflectivity * out.budget.gN;
    return out;
}

struct LatticeBackaction {
    double delta_power = 0.0;             // W
    double radiation_pressure_force = 0.0; // N
};

// Photon redistribution by an oscillating atom modulates the beam power by
// dP = F c / 2; the membrane feels F_rp = -2 R dP / c = -R F.
inline LatticeBackaction lattice_backaction(double atom_force, double reflectivity) {
    LatticeBackaction b;
    b.delta_power = atom_force * constants::c_light / 2.0;
    b.radiation_pressure_force = -reflectivity * atom_force;
    return b;
}

struct LatticeCoolingResult {
    double gamma_m = 0.0;        // rad/s, omega_m / Q
    double cooling_rate = 0.0;   // rad/s, Gamma_m
    double n_ss = 0.0;           // steady-state occupation
    double cooling_factor = 0.0; // Gamma_m / gamma_m
};

// Gamma_m = gamma_m + 4 R N g0^2 / gamma_a_cool and
// n_ss = (gamma_m/Gamma_m) n_th + (gamma_a_cool / 4 w_m)^2.
inline LatticeCoolingResult lattice_cooling(const LatticeSchemeParams& p) {
    if (!(p.atom_cooling_rate > 0.0))
        throw PhysicsError("lattice_cooling: atom_cooling_rate must be > 0");
    LatticeCoolingResult out;
    const double wm = p.membrane.frequency;
    const double R = p.membrane.power_reflectivity;
    const double g0 = coupling::g0_from_epsilon(1.0, lattice_trap_frequency(p), wm,
                                                p.atom.mass, p.membrane.effective_mass);
    out.gamma_m = wm / p.membrane.quality_factor;
    out.cooling_rate = out.gamma_m +
                       4.0 * R * static_cast<double>(p.n_atoms) * g0 * g0 / p.atom_cooling_rate;
    const double nth = physcore::thermal_occupation(wm, p.environment.bath_temperature);
    const double floor = p.atom_cooling_rate / (4.0 * wm);
    out.n_ss = (out.gamma_m / out.cooling_rate) * nth + floor * floor;
    out.cooling_factor = out.cooling_rate / out.gamma_m;
    return out;
}

// --- Magnetic coupling to the spin ---------------------------------------

struct StatePair {
    std::string name;
    double g_factor = 0.0;   // |g_F| of the field-sensitive level
    bool two_photon = false; // microwave-assisted transition between manifolds
};

inline StatePair state_pair_from_string(const std::string& s) {
    if (s == "F1m-1_F10") return {s, 0.5, false};
    if (s == "F1m-1_F21") return {s, 0.5, true};
    if (s == "F10_F20") return {s, 0.0, true};
    throw SchemaError("unknown state pair '" + s + "'");
}

struct MagneticSchemeParams {
    AtomSpecies atom;
    long n_atoms = 1;
    double magnet_moment = 0.0;  // J/T
    double distance = 0.0;       // m
    OscillatorSpec cantilever;
    double bias_field = 0.0;     // T
    StatePair state_pair;
    bool two_photon = false;
    double compensation_residual = 0.0; // fraction of the static gradient left
    Environment environment;
    double atomic_decoherence = 0.0;
};

struct MagneticSchemeResult {
    coupling::CouplingBudget budget;
    double field_gradient = 0.0;    // T/m
    double larmor_frequency = 0.0;  // rad/s at the given bias field
    double resonance_b0 = 0.0;      // T solving w_L = w_m; NaN for clock pairs
    double transfer_time = 0.0;     // s, pi / (2 g0 sqrt(N))
    double static_gradient_residual = 0.0; // T/m after compensation magnets
};

// Two-photon drive through the intermediate level costs a factor of about 3
// in rate; the model applies exactly 3.
inline constexpr double kTwoPhotonReduction = 3.0;

inline MagneticSchemeResult magnetic_budget(const MagneticSchemeParams& p) {
    if (!(p.bias_field > 0.0)) throw PhysicsError("magnetic scheme: bias_field must be > 0");
    if (p.state_pair.g_factor == 0.0 && !p.two_photon)
        throw PhysicsError("magnetic scheme: zero g-factor pair requires a two-photon drive");
    MagneticSchemeResult out;
    out.field_gradient = potentials::magnetic_dipole_gradient(p.magnet_moment, p.distance);
    out.static_gradient_residual = p.compensation_residual * out.field_gradient;

    const double wm = p.cantilever.frequency;
    const double b_qm = physcore::zero_point_amplitude(p.cantilever.effective_mass, wm);
    double g0 = constants::mu_B * out.field_gradient * b_qm /
                (std::sqrt(8.0) * constants::hbar);
    if (p.two_photon) g0 /= kTwoPhotonReduction;

    out.larmor_frequency = constants::mu_B * p.state_pair.g_factor * p.bias_field /
                           constants::hbar;
    out.resonance_b0 = (p.state_pair.g_factor > 0.0)
                           ? constants::hbar * wm / (constants::mu_B * p.state_pair.g_factor)
                           : std::numeric_limits<double>::quiet_NaN();
    out.transfer_time = constants::pi /
                        (2.0 * g0 * std::sqrt(static_cast<double>(p.n_atoms)));
    // Linear spin coupling has no curvature ratio; epsilon stays 0.
    out.budget = coupling::budget_from_rate(0.0, g0, p.n_atoms, wm, wm, p.cantilever,
                                            p.environment, p.atomic_decoherence);
    return out;
}

// --- Cavity-mediated coupling: reference record only ----------------------

// Reported scenario numbers for the cavity-mediated scheme. The derivation
// lives in the cited literature; nothing here consumes these values.
struct CavitySchemeRecord {
    double reported_g0 = 0.0;      // rad/s
    double reported_omega_m = 0.0; // rad/s
    double reported_q = 0.0;
    double finesse = 0.0;
    std::string note;
};

} // namespace hybridsim::schemes

#endif
