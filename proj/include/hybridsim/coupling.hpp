#ifndef HYBRIDSIM_COUPLING_HPP
#define HYBRIDSIM_COUPLING_HPP

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "hybridsim/constants.hpp"
#include "hybridsim/errors.hpp"
#include "hybridsim/physcore.hpp"
#include "hybridsim/potentials.hpp"
#include "hybridsim/types.hpp"

#include <json.hpp>

// Generic two-oscillator coupling engine: equilibrium shifts, deformed
// frequencies, anharmonicity, the coupling strength parameter epsilon, the
// single-phonon rate g0 and its collective enhancement, and the
// strong-coupling verdict.
namespace hybridsim::coupling {

struct CoupledPair {
    AtomSpecies atom;
    long n_atoms = 1;
    TrapSpec trap;
    OscillatorSpec oscillator;
    potentials::CouplingPotential potential;
    double equilibrium_distance = 0.0; // m
    Environment environment;
    double atomic_decoherence = 0.0;   // rad/s, supplied per scenario
    // Trap-distortion compensation (extra electrodes/magnets cancelling the
    // static deformation) enters only as a multiplier on epsilon.
    double compensation_factor = 1.0;

    void validate() const {
        atom.validate();
        trap.validate();
        oscillator.validate();
        environment.validate();
        if (n_atoms < 1) throw PhysicsError("CoupledPair: n_atoms must be >= 1");
        if (!potential.in_range(equilibrium_distance))
            throw PhysicsError("CoupledPair: equilibrium_distance outside potential valid range");
        if (compensation_factor < 1.0)
            throw PhysicsError("CoupledPair: compensation_factor must be >= 1");
    }
};

struct CouplingBudget {
    double epsilon = 0.0;          // signed
    double g0 = 0.0;               // rad/s
    double gN = 0.0;               // rad/s, sqrt(N) g0
    double gamma_m_dec = 0.0;      // rad/s
    double gamma_a_dec = 0.0;      // rad/s
    double n_th = 0.0;
    double effective_omega_a = 0.0; // rad/s
    double effective_omega_m = 0.0; // rad/s
    double detuning = 0.0;          // rad/s, effective omega_a - omega_m
    bool strong_coupling = false;

    static const char* csv_header() {
        return "epsilon,g0_hz,gN_hz,gamma_m_dec_hz,gamma_a_dec_hz,n_th,strong_coupling";
    }

    std::string csv_row() const;
    nlohmann::ordered_json to_json() const;
};

// Eq-level pieces -------------------------------------------------------

// Shifts of the two equilibrium positions caused by the potential gradient:
// dZ_a = +U_c'/(m w_a0^2), dZ_m = -U_c'/(M w_m0^2).
inline std::pair<double, double> equilibrium_shifts(const CoupledPair& p) {
    const double up = p.potential.derivative(1, p.equilibrium_distance);
    const double wa0 = p.trap.bare_frequency;
    const double wm0 = p.oscillator.frequency;
    if (!(wa0 > 0.0))
        throw PhysicsError("equilibrium_shifts: bare trap curvature is zero; shift undefined");
    const double dza = up / (p.atom.mass * wa0 * wa0);
    const double dzm = -up / (p.oscillator.effective_mass * wm0 * wm0);
    return {dza, dzm};
}

// Deformed trap frequencies, w_i^2 = w_i0^2 + U_c''/m_i. Throws
// TrapVanishedError when the atomic curvature drops to zero or below.
inline std::pair<double, double> effective_frequencies(const CoupledPair& p) {
    const double upp = p.potential.derivative(2, p.equilibrium_distance);
    const double wa0 = p.trap.bare_frequency;
    const double wm0 = p.oscillator.frequency;
    const double wa2 = wa0 * wa0 + upp / p.atom.mass;
    if (!(wa2 > 0.0)) {
        throw TrapVanishedError(
            "effective_frequencies: atom trap vanished (|U_c''| >= m w_a0^2)",
            p.atom.mass * wa0 * wa0);
    }
    const double wm2 = wm0 * wm0 + upp / p.oscillator.effective_mass;
    if (!(wm2 > 0.0))
        throw TrapVanishedError("effective_frequencies: mechanical mode destabilized",
                                p.oscillator.effective_mass * wm0 * wm0);
    return {std::sqrt(wa2), std::sqrt(wm2)};
}

// epsilon = U_c''/(m w_a0^2 + U_c''), signed; saturates at 1 for large
// positive curvature. Compensation is NOT applied here.
inline double coupling_strength_parameter(const CoupledPair& p) {
    const double upp = p.potential.derivative(2, p.equilibrium_distance);
    const double wa0 = p.trap.bare_frequency;
    const double denom = p.atom.mass * wa0 * wa0 + upp;
    if (!(denom > 0.0))
        throw TrapVanishedError("coupling_strength_parameter: trap vanished",
                                p.atom.mass * wa0 * wa0);
    return upp / denom;
}

// g0 = eps (w_a/2) sqrt(m/M), evaluated with the deformed w_a. Off
// resonance the full prefactor sqrt(w_a/w_m) is restored.
inline constexpr double kRwaDetuningThreshold = 1e-3;

inline double g0_from_epsilon(double epsilon, double omega_a, double omega_m,
                              double atom_mass, double oscillator_mass) {
    double g = epsilon * 0.5 * omega_a * std::sqrt(atom_mass / oscillator_mass);
    const double detuning = omega_a - omega_m;
    if (std::abs(detuning) > kRwaDetuningThreshold * omega_a)
        g *= std::sqrt(omega_a / omega_m);
    return g;
}

inline double single_phonon_coupling(const CoupledPair& p) {
    const auto [wa, wm] = effective_frequencies(p);
    const double eps = coupling_strength_parameter(p) * p.compensation_factor;
    return g0_from_epsilon(eps, wa, wm, p.atom.mass, p.oscillator.effective_mass);
}

// Amplitude-dependent oscillation frequency,
// w_osc^2(a) = w_a^2 + a^2 U_c''''/(8 m).
inline double anharmonic_frequency(const CoupledPair& p, double amplitude) {
    if (amplitude < 0.0) throw PhysicsError("anharmonic_frequency: amplitude must be >= 0");
    const auto [wa, wm] = effective_frequencies(p);
    (void)wm;
    const double u4 = p.potential.derivative(4, p.equilibrium_distance);
    const double w2 = wa * wa + amplitude * amplitude * u4 / (8.0 * p.atom.mass);
    if (!(w2 > 0.0))
        throw PhysicsError("anharmonic_frequency: amplitude beyond validity of the expansion");
    return std::sqrt(w2);
}

// Budget assembly --------------------------------------------------------

inline bool strong_coupling_verdict(double gN, double gamma_m_dec, double gamma_a_dec) {
    return std::abs(gN) > std::max(gamma_m_dec, gamma_a_dec);
}

// Assembles the budget from a known g0 (schemes whose coupling rate does not
// come from Eq-10 curvature, e.g. spin coupling, enter here).
inline CouplingBudget budget_from_rate(double epsilon, double g0, long n_atoms,
                                       double omega_a, double omega_m,
                                       const OscillatorSpec& osc, const Environment& env,
                                       double gamma_a_dec) {
    CouplingBudget b;
    b.epsilon = epsilon;
    b.g0 = g0;
    b.gN = std::sqrt(static_cast<double>(n_atoms)) * g0;
    b.gamma_m_dec = physcore::mechanical_decoherence_rate(osc, env);
    b.gamma_a_dec = gamma_a_dec;
    b.n_th = physcore::thermal_occupation(osc.frequency, env.bath_temperature);
    b.effective_omega_a = omega_a;
    b.effective_omega_m = omega_m;
    b.detuning = omega_a - omega_m;
    b.strong_coupling = strong_coupling_verdict(b.gN, b.gamma_m_dec, b.gamma_a_dec);
    return b;
}

// Schemes with a structural epsilon (lattice: the trap rides the mirror,
// eps = 1) but no meaningful pair potential.
inline CouplingBudget budget_from_epsilon(double epsilon, double atom_mass, long n_atoms,
                                          double omega_a, const OscillatorSpec& osc,
                                          const Environment& env, double gamma_a_dec) {
    const double g0 = g0_from_epsilon(epsilon, omega_a, osc.frequency, atom_mass,
                                      osc.effective_mass);
    return budget_from_rate(epsilon, g0, n_atoms, omega_a, osc.frequency, osc, env, gamma_a_dec);
}

// Full engine path: deformation-consistent epsilon and g0 from the pair
// potential.
inline CouplingBudget budget(const CoupledPair& p) {
    p.validate();
    const auto [wa, wm] = effective_frequencies(p);
    const double eps = coupling_strength_parameter(p) * p.compensation_factor;
    const double g0 = g0_from_epsilon(eps, wa, wm, p.atom.mass, p.oscillator.effective_mass);
    return budget_from_rate(eps, g0, p.n_atoms, wa, wm, p.oscillator, p.environment,
                            p.atomic_decoherence);
}

// ------------------------------------------------------------------------

inline std::string CouplingBudget::csv_row() const {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d",
                  epsilon, angular_to_hz(g0), angular_to_hz(gN), angular_to_hz(gamma_m_dec),
                  angular_to_hz(gamma_a_dec), n_th, strong_coupling ? 1 : 0);
    return buf;
}

inline nlohmann::ordered_json CouplingBudget::to_json() const {
    nlohmann::ordered_json j;
    j["epsilon"] = epsilon;
    j["g0_hz"] = angular_to_hz(g0);
    j["gN_hz"] = angular_to_hz(gN);
    j["gamma_m_dec_hz"] = angular_to_hz(gamma_m_dec);
    j["gamma_a_dec_hz"] = angular_to_hz(gamma_a_dec);
    j["n_th"] = n_th;
    j["strong_coupling"] = strong_coupling;
    j["effective_omega_a_hz"] = angular_to_hz(effective_omega_a);
    j["effective_omega_m_hz"] = angular_to_hz(effective_omega_m);
    j["detuning_hz"] = angular_to_hz(detuning);
    return j;
}

} // namespace hybridsim::coupling

#endif
