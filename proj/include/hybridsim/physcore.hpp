#ifndef HYBRIDSIM_PHYSCORE_HPP
#define HYBRIDSIM_PHYSCORE_HPP

#include <cmath>

#include "hybridsim/constants.hpp"
#include "hybridsim/errors.hpp"
#include "hybridsim/types.hpp"

// Closed-form single-mode quantities used throughout: zero-point and thermal
// amplitudes, thermal occupation, and the bath-limited decoherence rate.
namespace hybridsim::physcore {

// sqrt(hbar / 2 m w): rms ground-state amplitude of a mode.
inline double zero_point_amplitude(double mass, double frequency) {
    if (!(mass > 0.0) || !(frequency > 0.0))
        throw PhysicsError("zero_point_amplitude: mass and frequency must be > 0");
    return std::sqrt(constants::hbar / (2.0 * mass * frequency));
}

// sqrt(k_B T / m w^2): classical thermal amplitude; 0 at T=0.
inline double thermal_amplitude(double mass, double frequency, double temperature) {
    if (!(mass > 0.0) || !(frequency > 0.0))
        throw PhysicsError("thermal_amplitude: mass and frequency must be > 0");
    if (temperature < 0.0) throw PhysicsError("thermal_amplitude: temperature must be >= 0");
    return std::sqrt(constants::k_B * temperature / (mass * frequency * frequency));
}

// High-temperature occupation k_B T / hbar w (the regime of every scenario
// here; no Bose-Einstein form).
inline double thermal_occupation(double frequency, double temperature) {
    if (!(frequency > 0.0)) throw PhysicsError("thermal_occupation: frequency must be > 0");
    if (temperature < 0.0) throw PhysicsError("thermal_occupation: temperature must be >= 0");
    return constants::k_B * temperature / (constants::hbar * frequency);
}

// gamma_m,dec = k_B T / (hbar Q), the thermal decoherence rate of a
// mechanical mode with quality factor Q at bath temperature T.
inline double mechanical_decoherence_rate(double quality_factor, double temperature) {
    if (!(quality_factor > 0.0))
        throw PhysicsError("mechanical_decoherence_rate: quality_factor must be > 0");
    if (temperature < 0.0)
        throw PhysicsError("mechanical_decoherence_rate: temperature must be >= 0");
    return constants::k_B * temperature / (constants::hbar * quality_factor);
}

inline double mechanical_decoherence_rate(const OscillatorSpec& osc, const Environment& env) {
    return mechanical_decoherence_rate(osc.quality_factor, env.bath_temperature);
}

} // namespace hybridsim::physcore

#endif
