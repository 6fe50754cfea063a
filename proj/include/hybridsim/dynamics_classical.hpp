#ifndef HYBRIDSIM_DYNAMICS_CLASSICAL_HPP
#define HYBRIDSIM_DYNAMICS_CLASSICAL_HPP

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "hybridsim/coupling.hpp"
#include "hybridsim/errors.hpp"

// Classical two-body integration of the full (non-Taylor-expanded) coupled
// Hamiltonian. Used for normal-mode and anharmonicity cross-checks against
// the linearized engine.
namespace hybridsim::dynamics {

struct ClassicalState {
    double z_a = 0.0; // m
    double z_m = 0.0; // m
    double p_a = 0.0; // kg m/s
    double p_m = 0.0; // kg m/s
    double t = 0.0;   // s
};

struct ClassicalTrajectory {
    std::vector<double> t;
    std::vector<double> z_a, z_m, p_a, p_m;
    std::vector<double> energy;
    bool escaped = false;
    double escape_time = 0.0;

    std::string csv_header() const { return "t_s,z_a_m,z_m_m,p_a_si,p_m_si,energy_j"; }
    std::string csv_row(size_t i) const {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", t[i], z_a[i],
                      z_m[i], p_a[i], p_m[i], energy[i]);
        return buf;
    }
};

struct IntegrationOptions {
    double sample_interval = 0.0;   // s; 0 = duration/2048
    bool hold_oscillator_fixed = false; // single-body runs in the full potential
};

namespace detail {
struct EscapeSignal {};
} // namespace detail

inline double total_energy(const coupling::CoupledPair& p, double za0, double zm0,
                           const std::array<double, 4>& s) {
    const double m = p.atom.mass;
    const double M = p.oscillator.effective_mass;
    const double wa0 = p.trap.bare_frequency;
    const double wm0 = p.oscillator.frequency;
    const double sep = s[1] - s[0];
    return s[2] * s[2] / (2.0 * m) + s[3] * s[3] / (2.0 * M) +
           0.5 * m * wa0 * wa0 * (s[0] - za0) * (s[0] - za0) +
           0.5 * M * wm0 * wm0 * (s[1] - zm0) * (s[1] - zm0) +
           p.potential.derivative_unchecked(0, sep);
}

// Adaptive Cash-Karp integration of Eq-1 dynamics with the exact potential.
// The trajectory truncates with the escaped flag once the separation leaves
// the potential's validity window (the trap-loss channel).
inline ClassicalTrajectory integrate_classical(const coupling::CoupledPair& p,
                                               const ClassicalState& initial, double duration,
                                               double tol,
                                               const IntegrationOptions& opt = {}) {
    if (!(tol > 0.0)) throw PhysicsError("integrate_classical: tol must be > 0");
    const double m = p.atom.mass;
    const double M = p.oscillator.effective_mass;
    const double wa0 = p.trap.bare_frequency;
    const double wm0 = p.oscillator.frequency;
    // Bare equilibria consistent with the configured separation: the
    // mechanical center sits at equilibrium_distance above the atom center.
    const double za0 = p.trap.bare_minimum;
    const double zm0 = p.trap.bare_minimum + p.equilibrium_distance;

    const double d_lo = p.potential.valid_min();
    const double d_hi = p.potential.valid_max();

    using state_type = std::array<double, 4>; // z_a, z_m, p_a, p_m
    auto rhs = [&](const state_type& s, state_type& dsdt, double /*t*/) {
        const double sep = s[1] - s[0];
        if (sep < d_lo || sep > d_hi) throw detail::EscapeSignal{};
        const double up = p.potential.derivative_unchecked(1, sep);
        dsdt[0] = s[2] / m;
        dsdt[1] = opt.hold_oscillator_fixed ? 0.0 : s[3] / M;
        dsdt[2] = -m * wa0 * wa0 * (s[0] - za0) + up;
        dsdt[3] = opt.hold_oscillator_fixed
                      ? 0.0
                      : -M * wm0 * wm0 * (s[1] - zm0) - up;
    };

    ClassicalTrajectory traj;
    const double dt_out = opt.sample_interval > 0.0 ? opt.sample_interval : duration / 2048.0;
    state_type s{initial.z_a, initial.z_m, initial.p_a, initial.p_m};

    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled<ode::runge_kutta_cash_karp54<state_type>>(tol, tol);

    auto observe = [&](const state_type& st, double t) {
        traj.t.push_back(initial.t + t);
        traj.z_a.push_back(st[0]);
        traj.z_m.push_back(st[1]);
        traj.p_a.push_back(st[2]);
        traj.p_m.push_back(st[3]);
        traj.energy.push_back(total_energy(p, za0, zm0, st));
    };

    try {
        ode::integrate_const(stepper, rhs, s, 0.0, duration, dt_out, observe);
    } catch (const detail::EscapeSignal&) {
        traj.escaped = true;
        traj.escape_time = traj.t.empty() ? initial.t : traj.t.back();
    }
    return traj;
}

// Oscillation period from successive rising zero crossings of z_a - center,
// linearly interpolated. Requires at least two full cycles in the trajectory.
inline double extract_period(const std::vector<double>& t, const std::vector<double>& x,
                             double center) {
    std::vector<double> crossings;
    for (size_t i = 1; i < x.size(); ++i) {
        const double a = x[i - 1] - center;
        const double b = x[i] - center;
        if (a < 0.0 && b >= 0.0) {
            const double frac = a / (a - b);
            crossings.push_back(t[i - 1] + frac * (t[i] - t[i - 1]));
        }
    }
    if (crossings.size() < 2)
        throw ConvergenceError("extract_period: fewer than two rising crossings");
    return (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
}

// Exact static equilibrium of the coupled pair (the Eq-3 shifts summed to
// all orders), by fixed-point iteration on the separation.
inline std::pair<double, double> static_equilibrium(const coupling::CoupledPair& p) {
    const double m = p.atom.mass;
    const double M = p.oscillator.effective_mass;
    const double wa0 = p.trap.bare_frequency;
    const double wm0 = p.oscillator.frequency;
    const double za0 = p.trap.bare_minimum;
    const double zm0 = p.trap.bare_minimum + p.equilibrium_distance;
    double s = p.equilibrium_distance;
    double za = za0, zm = zm0;
    for (int i = 0; i < 200; ++i) {
        const double up = p.potential.derivative_unchecked(1, s);
        const double za_new = za0 + up / (m * wa0 * wa0);
        const double zm_new = zm0 - up / (M * wm0 * wm0);
        const double s_new = zm_new - za_new;
        if (std::abs(s_new - s) < 1e-18 + 1e-15 * std::abs(s)) {
            za = za_new; zm = zm_new; s = s_new;
            break;
        }
        za = za_new; zm = zm_new; s = s_new;
    }
    return {za, zm};
}

// Frequency of the slow energy exchange between the two oscillators, from
// the first minimum of the atom-side energy envelope. For two resonant
// linearly coupled modes the exchange (beat) angular frequency is 2 g0.
inline double energy_exchange_frequency(const coupling::CoupledPair& p,
                                        const ClassicalTrajectory& traj,
                                        double z_a_center, double omega_a_eff) {
    const double m = p.atom.mass;
    std::vector<double> ea(traj.t.size());
    for (size_t i = 0; i < traj.t.size(); ++i) {
        ea[i] = traj.p_a[i] * traj.p_a[i] / (2.0 * m) +
                0.5 * m * omega_a_eff * omega_a_eff * (traj.z_a[i] - z_a_center) *
                    (traj.z_a[i] - z_a_center);
    }
    // E_a(t) = E0 cos^2(g0 t): the half-energy crossings at g0 t = pi/4 and
    // 3 pi/4 bracket the transfer minimum symmetrically, which makes their
    // midpoint robust against the fast carrier wobble on E_a.
    const double half = 0.5 * ea.front();
    double t_down = -1.0, t_up = -1.0;
    for (size_t i = 1; i < ea.size(); ++i) {
        if (t_down < 0.0 && ea[i - 1] >= half && ea[i] < half) {
            const double f = (ea[i - 1] - half) / (ea[i - 1] - ea[i]);
            t_down = traj.t[i - 1] + f * (traj.t[i] - traj.t[i - 1]);
        } else if (t_down >= 0.0 && ea[i - 1] <= half && ea[i] > half) {
            const double f = (half - ea[i - 1]) / (ea[i] - ea[i - 1]);
            t_up = traj.t[i - 1] + f * (traj.t[i] - traj.t[i - 1]);
            break;
        }
    }
    if (t_down < 0.0 || t_up < 0.0)
        throw ConvergenceError("energy_exchange_frequency: no full transfer inside run");
    const double t_min = 0.5 * (t_down + t_up);
    // Full transfer happens at half the beat period: beat = pi / t_min.
    return constants::pi / t_min;
}

} // namespace hybridsim::dynamics

#endif
