#ifndef HYBRIDSIM_CONSTANTS_HPP
#define HYBRIDSIM_CONSTANTS_HPP

namespace hybridsim::constants {

// CODATA 2018, SI. hbar, e, k_B and c are exact by definition since the
// 2019 redefinition.
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double k_B = 1.380649e-23;         // J/K
inline constexpr double mu_B = 9.2740100783e-24;    // J/T
inline constexpr double mu_0 = 1.25663706212e-6;    // N/A^2
inline constexpr double epsilon_0 = 8.8541878128e-12; // F/m
inline constexpr double c_light = 299792458.0;      // m/s
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double g_gravity = 9.80665;        // m/s^2
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

} // namespace hybridsim::constants

namespace hybridsim {

// All internal frequencies are angular (rad/s). User-facing I/O is in Hz;
// convert exactly once at the boundary.
inline constexpr double hz_to_angular(double f_hz) { return constants::two_pi * f_hz; }
inline constexpr double angular_to_hz(double w) { return w / constants::two_pi; }

} // namespace hybridsim

#endif
