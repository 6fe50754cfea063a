#ifndef HYBRIDSIM_TRAPSCAPE_HPP
#define HYBRIDSIM_TRAPSCAPE_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hybridsim/constants.hpp"
#include "hybridsim/coupling.hpp"
#include "hybridsim/errors.hpp"
#include "hybridsim/potentials.hpp"
#include "hybridsim/types.hpp"

// Combined-potential analysis for the surface-coupling geometry: a bare
// harmonic trap against an attractive surface potential. Locates the trap
// minimum and the barrier toward the surface, reports the deformed
// frequency, epsilon and a bound-level estimate, and runs the eps(d) and
// eps(U0) sweeps.
namespace hybridsim::trapscape {

struct CombinedPotential1D {
    AtomSpecies atom;
    double bare_frequency = 0.0;  // rad/s
    double bare_minimum = 0.0;    // m, absolute position of the bare trap center
    double surface_position = 0.0; // m, absolute position Z_m of the surface
    std::optional<potentials::CouplingPotential> surface_term;
    bool gravity_on = false;
    // Bookkeeping offset; physical potentials are defined up to a constant.
    double energy_offset = 0.0;   // J

    // zeta is the distance from the surface.
    double value(double zeta) const {
        const double m = atom.mass;
        const double dz = zeta - (bare_minimum - surface_position);
        double u = 0.5 * m * bare_frequency * bare_frequency * dz * dz + energy_offset;
        if (surface_term) u += surface_term->derivative_unchecked(0, zeta);
        if (gravity_on) u += m * constants::g_gravity * zeta;
        return u;
    }

    double derivative(double zeta) const {
        const double m = atom.mass;
        const double dz = zeta - (bare_minimum - surface_position);
        double up = m * bare_frequency * bare_frequency * dz;
        if (surface_term) up += surface_term->derivative_unchecked(1, zeta);
        if (gravity_on) up += m * constants::g_gravity;
        return up;
    }

    double curvature(double zeta) const {
        const double m = atom.mass;
        double upp = m * bare_frequency * bare_frequency;
        if (surface_term) upp += surface_term->derivative_unchecked(2, zeta);
        return upp;
    }
};

struct TrapAnalysis {
    bool vanished = false;
    // The following are NaN when vanished.
    double minimum_position = std::numeric_limits<double>::quiet_NaN(); // m, absolute
    double equilibrium_distance = std::numeric_limits<double>::quiet_NaN(); // m, from surface
    double effective_frequency = std::numeric_limits<double>::quiet_NaN(); // rad/s
    double barrier_height = std::numeric_limits<double>::quiet_NaN(); // J; +inf when no surface term
    double barrier_over_hbar_omega = std::numeric_limits<double>::quiet_NaN();
    double epsilon = std::numeric_limits<double>::quiet_NaN(); // signed, Eq-7 at the minimum
    long bound_level_estimate = 0; // harmonic counting; -1 = unbounded
    double saddle_position = std::numeric_limits<double>::quiet_NaN(); // m, absolute
    int n_minima = 0;
};

namespace detail {

// Bisection on a sign change of f; returns the root to near machine
// precision in the abscissa.
template <typename F>
double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) return mid;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

// Locates stationary points of the combined potential between the surface
// and the far harmonic side. Multiple minima: the one nearest the bare trap
// center wins; the count is reported.
inline TrapAnalysis analyze(const CombinedPotential1D& pot) {
    TrapAnalysis out;
    const double m = pot.atom.mass;
    const double w0 = pot.bare_frequency;
    const double d0 = pot.bare_minimum - pot.surface_position;

    if (!pot.surface_term) {
        const double sag = pot.gravity_on ? constants::g_gravity / (w0 * w0) : 0.0;
        out.vanished = false;
        out.minimum_position = pot.bare_minimum - sag;
        out.equilibrium_distance = out.minimum_position - pot.surface_position;
        out.effective_frequency = w0;
        out.barrier_height = std::numeric_limits<double>::infinity();
        out.barrier_over_hbar_omega = std::numeric_limits<double>::infinity();
        out.epsilon = 0.0;
        out.bound_level_estimate = -1;
        out.n_minima = 1;
        return out;
    }

    // Scan U' on a geometric grid for sign changes.
    const double a_ho = std::sqrt(constants::hbar / (m * w0));
    const double lo = std::max(10e-9, pot.surface_term->valid_min());
    const double hi = std::max(d0 * 1.5 + 5.0 * a_ho, lo * 4.0);
    const int n_scan = 3000;
    const double ratio = std::pow(hi / lo, 1.0 / n_scan);

    std::vector<double> minima, saddles;
    double z_prev = lo;
    double f_prev = pot.derivative(z_prev);
    double z = lo;
    for (int i = 1; i <= n_scan; ++i) {
        z *= ratio;
        const double f = pot.derivative(z);
        if ((f_prev < 0.0) != (f < 0.0)) {
            const double root = detail::bisect([&](double x) { return pot.derivative(x); },
                                               z_prev, z);
            if (pot.curvature(root) > 0.0)
                minima.push_back(root);
            else
                saddles.push_back(root);
        }
        z_prev = z;
        f_prev = f;
    }

    if (minima.empty()) {
        out.vanished = true;
        return out;
    }

    // Minimum nearest the bare center.
    double zmin = minima.front();
    for (double zm : minima)
        if (std::abs(zm - d0) < std::abs(zmin - d0)) zmin = zm;
    out.n_minima = static_cast<int>(minima.size());

    // Saddle: the barrier top between the surface and the chosen minimum.
    double zsad = std::numeric_limits<double>::quiet_NaN();
    for (double zs : saddles)
        if (zs < zmin && (!(zsad == zsad) || zs > zsad)) zsad = zs;

    out.vanished = false;
    out.minimum_position = pot.surface_position + zmin;
    out.equilibrium_distance = zmin;
    const double upp_total = pot.curvature(zmin);
    out.effective_frequency = std::sqrt(upp_total / m);
    out.epsilon = pot.surface_term->derivative_unchecked(2, zmin) / upp_total;
    if (zsad == zsad) {
        out.saddle_position = pot.surface_position + zsad;
        out.barrier_height = pot.value(zsad) - pot.value(zmin);
    } else {
        out.barrier_height = std::numeric_limits<double>::infinity();
    }
    out.barrier_over_hbar_omega =
        out.barrier_height / (constants::hbar * out.effective_frequency);
    out.bound_level_estimate =
        std::isinf(out.barrier_height)
            ? -1
            : static_cast<long>(std::floor(out.barrier_over_hbar_omega)) + 1;
    return out;
}

// Bare trap solving U'(d)=0 and U''(d) = m*omega_target^2 at the requested
// distance: the sweep convention that keeps the deformed trap resonant with
// the oscillator, as the experiment does by retuning the trap current.
inline CombinedPotential1D retuned_trap(const AtomSpecies& atom,
                                        const potentials::CouplingPotential& surface,
                                        double surface_position, double d,
                                        double omega_target, bool gravity_on = false) {
    const double m = atom.mass;
    const double upp = surface.derivative_unchecked(2, d);
    double mw0sq = m * omega_target * omega_target - upp;
    const double floor = m * omega_target * omega_target * 1e-12;
    if (mw0sq < floor) mw0sq = floor;
    const double w0 = std::sqrt(mw0sq / m);
    double up = surface.derivative_unchecked(1, d);
    if (gravity_on) up += m * constants::g_gravity;
    const double center = surface_position + d + up / mw0sq;
    CombinedPotential1D pot;
    pot.atom = atom;
    pot.bare_frequency = w0;
    pot.bare_minimum = center;
    pot.surface_position = surface_position;
    pot.surface_term = surface;
    pot.gravity_on = gravity_on;
    return pot;
}

enum class SweepMode {
    // Bare frequency re-solved per point so the deformed trap stays at the
    // design frequency; the grid distance is the actual minimum position.
    retuned_resonant,
    // Bare trap held fixed; the grid distance is the bare-center distance
    // from the surface (the published eps(d) curve construction).
    fixed_bare,
};

struct SweepConfig {
    AtomSpecies atom;
    potentials::CouplingPotential surface;
    double omega_design = 0.0; // rad/s; bare (fixed_bare) or target (retuned)
    SweepMode mode = SweepMode::retuned_resonant;
    bool gravity_on = false;   // off for the published-curve reproductions
    double surface_position = 0.0;

    SweepConfig(AtomSpecies a, potentials::CouplingPotential s, double omega)
        : atom(std::move(a)), surface(std::move(s)), omega_design(omega) {}
};

struct SweepRow {
    double d = 0.0;            // m, grid coordinate
    double epsilon = std::numeric_limits<double>::quiet_NaN();
    double u0_over_hbar_omega = std::numeric_limits<double>::quiet_NaN();
    double omega_a = std::numeric_limits<double>::quiet_NaN(); // rad/s
    bool vanished = false;
    TrapAnalysis analysis;
};

// eps as a function of distance. In fixed_bare mode the epsilon column is
// the design-curve estimate U_c''(d)/(m w_design^2) evaluated at the grid
// distance; in retuned mode this coincides with Eq-7 at the minimum.
inline std::vector<SweepRow> epsilon_vs_distance(const SweepConfig& cfg,
                                                 const std::vector<double>& d_grid) {
    for (size_t i = 1; i < d_grid.size(); ++i)
        if (!(d_grid[i] > d_grid[i - 1]))
            throw PhysicsError("epsilon_vs_distance: grid must be strictly increasing");
    std::vector<SweepRow> rows;
    rows.reserve(d_grid.size());
    const double m = cfg.atom.mass;
    const double w = cfg.omega_design;
    for (double d : d_grid) {
        SweepRow row;
        row.d = d;
        CombinedPotential1D pot;
        if (cfg.mode == SweepMode::retuned_resonant) {
            pot = retuned_trap(cfg.atom, cfg.surface, cfg.surface_position, d, w,
                               cfg.gravity_on);
        } else {
            pot.atom = cfg.atom;
            pot.bare_frequency = w;
            pot.bare_minimum = cfg.surface_position + d;
            pot.surface_position = cfg.surface_position;
            pot.surface_term = cfg.surface;
            pot.gravity_on = cfg.gravity_on;
        }
        row.analysis = analyze(pot);
        row.vanished = row.analysis.vanished;
        if (!row.vanished) {
            row.u0_over_hbar_omega = row.analysis.barrier_over_hbar_omega;
            row.omega_a = row.analysis.effective_frequency;
            row.epsilon = (cfg.mode == SweepMode::fixed_bare)
                              ? cfg.surface.derivative_unchecked(2, d) / (m * w * w)
                              : row.analysis.epsilon;
        }
        rows.push_back(row);
    }
    return rows;
}

// Distance at which the trap vanishes (fixed_bare mode), by bisection on the
// vanished flag of analyze().
inline double critical_distance(const SweepConfig& cfg) {
    const double m = cfg.atom.mass;
    const double w = cfg.omega_design;
    auto vanished_at = [&](double d) {
        CombinedPotential1D pot;
        pot.atom = cfg.atom;
        pot.bare_frequency = w;
        pot.bare_minimum = cfg.surface_position + d;
        pot.surface_position = cfg.surface_position;
        pot.surface_term = cfg.surface;
        pot.gravity_on = cfg.gravity_on;
        return analyze(pot).vanished;
    };
    // Length scale where |U_c''| = m w^2.
    const double p = cfg.surface.power();
    const double amag = std::abs(cfg.surface.coefficient()) * p * (p + 1.0);
    double lo = std::pow(amag / (m * w * w), 1.0 / (p + 2.0));
    double hi = lo * 2.0;
    int guard = 0;
    while (vanished_at(hi)) {
        hi *= 1.5;
        if (++guard > 100) throw ConvergenceError("critical_distance: no surviving trap found");
    }
    guard = 0;
    while (!vanished_at(lo)) {
        lo *= 0.75;
        if (++guard > 100) throw ConvergenceError("critical_distance: no vanishing point found");
    }
    for (int i = 0; i < 120; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (vanished_at(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Barrier height as a function of distance in retuned mode is monotone;
// invert it by bracketed bisection.
inline double distance_for_barrier(const SweepConfig& cfg, double u0_target_j) {
    if (cfg.mode != SweepMode::retuned_resonant)
        throw PhysicsError("distance_for_barrier: requires retuned_resonant mode");
    const double m = cfg.atom.mass;
    const double w = cfg.omega_design;
    auto barrier_at = [&](double d) {
        const auto pot =
            retuned_trap(cfg.atom, cfg.surface, cfg.surface_position, d, w, cfg.gravity_on);
        const auto an = analyze(pot);
        return an.vanished ? 0.0 : an.barrier_height;
    };
    const double p = cfg.surface.power();
    const double amag = std::abs(cfg.surface.coefficient()) * p * (p + 1.0);
    double lo = std::pow(amag / (m * w * w), 1.0 / (p + 2.0));
    double hi = lo * 1.3;
    int guard = 0;
    while (barrier_at(hi) < u0_target_j) {
        hi *= 1.3;
        if (++guard > 200) throw ConvergenceError("distance_for_barrier: target out of reach");
    }
    auto f = [&](double d) { return barrier_at(d) - u0_target_j; };
    return detail::bisect(f, lo, hi);
}

// eps as a function of target barrier height (in units of hbar*omega_design),
// retuned mode.
inline std::vector<SweepRow> epsilon_vs_barrier(const SweepConfig& cfg,
                                                const std::vector<double>& u0_grid_hbar_omega) {
    std::vector<SweepRow> rows;
    rows.reserve(u0_grid_hbar_omega.size());
    for (double u0hw : u0_grid_hbar_omega) {
        const double d = distance_for_barrier(cfg, u0hw * constants::hbar * cfg.omega_design);
        const auto pot =
            retuned_trap(cfg.atom, cfg.surface, cfg.surface_position, d, cfg.omega_design,
                         cfg.gravity_on);
        SweepRow row;
        row.d = d;
        row.analysis = analyze(pot);
        row.vanished = row.analysis.vanished;
        if (!row.vanished) {
            row.epsilon = row.analysis.epsilon;
            row.u0_over_hbar_omega = row.analysis.barrier_over_hbar_omega;
            row.omega_a = row.analysis.effective_frequency;
        }
        rows.push_back(row);
    }
    return rows;
}

inline const char* sweep_csv_header() { return "d_m,U0_over_hbar_omega,epsilon,omega_a_hz,vanished"; }

inline std::string sweep_csv_row(const SweepRow& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d", r.d, r.u0_over_hbar_omega,
                  r.epsilon, angular_to_hz(r.omega_a), r.vanished ? 1 : 0);
    return buf;
}

} // namespace hybridsim::trapscape

#endif
