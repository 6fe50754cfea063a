#ifndef HYBRIDSIM_GPE_HPP
#define HYBRIDSIM_GPE_HPP

#include <cmath>
#include <complex>
#include <mutex>
#include <string>
#include <vector>

#include <fftw3.h>

#include "hybridsim/constants.hpp"
#include "hybridsim/errors.hpp"
#include "hybridsim/trapscape.hpp"
#include "hybridsim/types.hpp"

// 1D time-dependent Gross-Pitaevskii solver for the surface-coupling
// experiment: split-step Fourier propagation, imaginary-time ground state,
// driven surface position, absorbing boundary behind the barrier, and the
// contrast / spectroscopy observables.
namespace hybridsim::gpe {

using Complex = std::complex<double>;

struct GpeGrid {
    double z_min = 0.0; // m, absolute
    double z_max = 0.0; // m
    int points = 0;     // power of two

    void validate() const {
        if (!(z_max > z_min)) throw PhysicsError("GpeGrid: z_max must exceed z_min");
        if (points < 16 || (points & (points - 1)) != 0)
            throw PhysicsError("GpeGrid: points must be a power of two >= 16");
    }
    double spacing() const { return (z_max - z_min) / points; }
};

struct GpeDrive {
    double amplitude = 0.0; // m, surface oscillation amplitude b
    double omega = 0.0;     // rad/s
    double phase = 0.0;     // rad, starts at zero by default
};

struct GpeAbsorber {
    // Cosine-ramped negative imaginary potential starting this far below the
    // barrier saddle (toward the surface) and reaching `strength` at the
    // grid edge.
    double offset_from_saddle = 50e-9; // m
    double strength = 0.0;             // J; 0 = auto (15 hbar omega)
};

struct GpeConfig {
    GpeGrid grid;
    AtomSpecies atom;
    double n_atoms = 1.0;
    double interaction_1d = 0.0; // J m
    trapscape::CombinedPotential1D potential;
    GpeDrive drive;
    GpeAbsorber absorber;
    double timestep = 1e-7;        // s
    double potential_floor = 0.0;  // J; 0 = auto (-40 hbar omega below minimum energy)
};

struct GroundStateResult {
    std::vector<Complex> psi;
    double chemical_potential = 0.0; // J
    double energy = 0.0;             // J
    long iterations = 0;
};

struct EvolveResult {
    std::vector<Complex> psi;
    std::vector<double> times;
    std::vector<double> norm;          // atoms remaining
    std::vector<double> com;           // m, center of mass of the remaining cloud
    std::vector<double> energy;        // J, only meaningful without absorber loss
    double final_norm = 0.0;
};

namespace detail {

inline std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

} // namespace detail

class Gpe1D {
public:
    explicit Gpe1D(const GpeConfig& cfg) : cfg_(cfg), n_(cfg.grid.points) {
        cfg_.grid.validate();
        cfg_.atom.validate();
        if (cfg_.n_atoms <= 0.0) throw PhysicsError("Gpe1D: n_atoms must be > 0");
        if (!(cfg_.timestep > 0.0)) throw PhysicsError("Gpe1D: timestep must be > 0");

        analysis_ = trapscape::analyze(cfg_.potential);
        if (analysis_.vanished) throw PhysicsError("Gpe1D: trap vanished; nothing to solve");
        has_surface_ = cfg_.potential.surface_term.has_value();
        const double hw = constants::hbar * analysis_.effective_frequency;
        floor_ = cfg_.potential_floor != 0.0
                     ? cfg_.potential_floor
                     : cfg_.potential.value(analysis_.equilibrium_distance) - 40.0 * hw;
        absorber_strength_ = cfg_.absorber.strength > 0.0 ? cfg_.absorber.strength : 15.0 * hw;

        z_.resize(n_);
        k2_.resize(n_);
        const double dz = cfg_.grid.spacing();
        for (int i = 0; i < n_; ++i) z_[i] = cfg_.grid.z_min + i * dz;
        const double dk = constants::two_pi / (cfg_.grid.z_max - cfg_.grid.z_min);
        for (int i = 0; i < n_; ++i) {
            const int m = (i <= n_ / 2) ? i : i - n_;
            k2_[i] = (m * dk) * (m * dk);
        }

        build_static_arrays();
        validate_resolution();

        buf_.resize(n_);
        {
            std::lock_guard<std::mutex> lock(detail::fftw_mutex());
            plan_fwd_ = fftw_plan_dft_1d(n_, reinterpret_cast<fftw_complex*>(buf_.data()),
                                         reinterpret_cast<fftw_complex*>(buf_.data()),
                                         FFTW_FORWARD, FFTW_ESTIMATE);
            plan_bwd_ = fftw_plan_dft_1d(n_, reinterpret_cast<fftw_complex*>(buf_.data()),
                                         reinterpret_cast<fftw_complex*>(buf_.data()),
                                         FFTW_BACKWARD, FFTW_ESTIMATE);
        }
    }

    ~Gpe1D() {
        std::lock_guard<std::mutex> lock(detail::fftw_mutex());
        fftw_destroy_plan(plan_fwd_);
        fftw_destroy_plan(plan_bwd_);
    }

    Gpe1D(const Gpe1D&) = delete;
    Gpe1D& operator=(const Gpe1D&) = delete;

    const GpeConfig& config() const { return cfg_; }
    const trapscape::TrapAnalysis& analysis() const { return analysis_; }
    const std::vector<double>& grid_z() const { return z_; }
    double spacing() const { return cfg_.grid.spacing(); }

    double norm_of(const std::vector<Complex>& psi) const {
        double s = 0.0;
        for (const auto& c : psi) s += std::norm(c);
        return s * spacing();
    }

    double com_of(const std::vector<Complex>& psi) const {
        double s = 0.0, zs = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double w = std::norm(psi[i]);
            s += w;
            zs += w * z_[i];
        }
        return s > 0.0 ? zs / s : 0.0;
    }

    // E = int [ hbar^2/2m |psi'|^2 + V |psi|^2 + g/2 |psi|^4 ] dz,
    // kinetic term evaluated spectrally.
    double energy_of(const std::vector<Complex>& psi, double surface_shift = 0.0) const {
        const double dz = spacing();
        std::vector<Complex> tmp = psi;
        fft_forward(tmp);
        double kin = 0.0;
        for (int i = 0; i < n_; ++i) kin += k2_[i] * std::norm(tmp[i]);
        kin *= constants::hbar * constants::hbar / (2.0 * cfg_.atom.mass) * dz /
               (static_cast<double>(n_) * n_);
        double pot = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double w = std::norm(psi[i]);
            pot += potential_at(i, surface_shift) * w +
                   0.5 * cfg_.interaction_1d * w * w;
        }
        return kin + pot * dz;
    }

    double chemical_potential_of(const std::vector<Complex>& psi) const {
        const double dz = spacing();
        std::vector<Complex> tmp = psi;
        fft_forward(tmp);
        double kin = 0.0;
        for (int i = 0; i < n_; ++i) kin += k2_[i] * std::norm(tmp[i]);
        kin *= constants::hbar * constants::hbar / (2.0 * cfg_.atom.mass) * dz /
               (static_cast<double>(n_) * n_);
        double pot = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double w = std::norm(psi[i]);
            pot += potential_at(i, 0.0) * w + cfg_.interaction_1d * w * w;
        }
        return (kin + pot * dz) / norm_of(psi);
    }

    // Imaginary-time propagation on the plateau-walled potential (the region
    // behind the saddle is flattened at the saddle energy so relaxation
    // cannot drain into the surface well).
    GroundStateResult ground_state(long max_iters = 200000, double tol_per_step = 1e-12) const {
        const double dz = spacing();
        const double dt = cfg_.timestep * 2.0;
        std::vector<double> vgs(n_);
        if (has_surface_) {
            const double zsad = analysis_.saddle_position;
            const double usad = cfg_.potential.value(zsad - cfg_.potential.surface_position);
            for (int i = 0; i < n_; ++i) {
                const double zeta = z_[i] - cfg_.potential.surface_position;
                vgs[i] = (z_[i] < zsad) ? usad : cfg_.potential.value(zeta);
            }
        } else {
            for (int i = 0; i < n_; ++i)
                vgs[i] = cfg_.potential.value(z_[i] - cfg_.potential.surface_position);
        }

        std::vector<Complex> psi(n_);
        const double sigma = std::sqrt(constants::hbar /
                                       (cfg_.atom.mass * analysis_.effective_frequency));
        for (int i = 0; i < n_; ++i) {
            const double u = (z_[i] - analysis_.minimum_position) / sigma;
            psi[i] = std::exp(-0.5 * u * u);
        }
        renormalize(psi);

        std::vector<double> kfac(n_);
        for (int i = 0; i < n_; ++i)
            kfac[i] = std::exp(-constants::hbar * k2_[i] / (2.0 * cfg_.atom.mass) * dt) /
                      static_cast<double>(n_);

        GroundStateResult out;
        double e_prev = 0.0;
        bool have_prev = false;
        const int check_every = 50;
        for (long it = 0; it < max_iters; ++it) {
            for (int i = 0; i < n_; ++i) {
                const double v = vgs[i] + cfg_.interaction_1d * std::norm(psi[i]);
                psi[i] *= std::exp(-v * dt / (2.0 * constants::hbar));
            }
            fft_forward(psi);
            for (int i = 0; i < n_; ++i) psi[i] *= kfac[i];
            fft_backward_unscaled(psi);
            for (int i = 0; i < n_; ++i) {
                const double v = vgs[i] + cfg_.interaction_1d * std::norm(psi[i]);
                psi[i] *= std::exp(-v * dt / (2.0 * constants::hbar));
            }
            renormalize(psi);
            if (it % check_every == check_every - 1) {
                double e = 0.0;
                {
                    std::vector<Complex> tmp = psi;
                    fft_forward(tmp);
                    for (int i = 0; i < n_; ++i) e += k2_[i] * std::norm(tmp[i]);
                    e *= constants::hbar * constants::hbar / (2.0 * cfg_.atom.mass) * dz /
                         (static_cast<double>(n_) * n_);
                    for (int i = 0; i < n_; ++i) {
                        const double w = std::norm(psi[i]);
                        e += (vgs[i] * w + 0.5 * cfg_.interaction_1d * w * w) * dz;
                    }
                }
                if (have_prev &&
                    std::abs(e - e_prev) < tol_per_step * check_every * std::abs(e)) {
                    out.iterations = it + 1;
                    out.psi = std::move(psi);
                    out.energy = e;
                    out.chemical_potential = chemical_potential_of(out.psi);
                    return out;
                }
                e_prev = e;
                have_prev = true;
            }
        }
        throw ConvergenceError("gpe::ground_state: no convergence in max iterations; residual " +
                               std::to_string(std::abs(e_prev)));
    }

    struct EvolveOptions {
        double duration = 0.0;      // s
        int store_stride = 200;     // observable sampling, in steps
        bool absorber_on = true;
        bool record_energy = false;
    };

    // Real-time split-step propagation with the oscillating surface
    // Z_m(t) = Z_m0 + b sin(w_p t + phase).
    EvolveResult evolve(const std::vector<Complex>& psi0, const EvolveOptions& opt) const {
        if (static_cast<int>(psi0.size()) != n_)
            throw PhysicsError("Gpe1D::evolve: psi size mismatch");
        const double dt = cfg_.timestep;
        const long n_steps = static_cast<long>(std::llround(opt.duration / dt));
        std::vector<Complex> psi = psi0;

        std::vector<Complex> kfac(n_);
        for (int i = 0; i < n_; ++i) {
            const double phase = -constants::hbar * k2_[i] / (2.0 * cfg_.atom.mass) * dt;
            kfac[i] = std::polar(1.0 / n_, phase);
        }

        EvolveResult out;
        const double inv_2hbar = dt / (2.0 * constants::hbar);
        std::vector<double> vt(n_);

        auto store = [&](double t) {
            out.times.push_back(t);
            out.norm.push_back(norm_of(psi));
            out.com.push_back(com_of(psi));
            if (opt.record_energy) out.energy.push_back(energy_of(psi));
        };
        store(0.0);

        double t = 0.0;
        for (long s = 0; s < n_steps; ++s) {
            const double tm = t + 0.5 * dt;
            const double shift =
                cfg_.drive.amplitude * std::sin(cfg_.drive.omega * tm + cfg_.drive.phase);
            build_potential(shift, vt);
            for (int i = 0; i < n_; ++i) {
                const double theta = -(vt[i] + cfg_.interaction_1d * std::norm(psi[i])) * inv_2hbar;
                const double damp = opt.absorber_on ? std::exp(-w_[i] * inv_2hbar) : 1.0;
                psi[i] *= std::polar(damp, theta);
            }
            fft_forward(psi);
            for (int i = 0; i < n_; ++i) psi[i] *= kfac[i];
            fft_backward_unscaled(psi);
            for (int i = 0; i < n_; ++i) {
                const double theta = -(vt[i] + cfg_.interaction_1d * std::norm(psi[i])) * inv_2hbar;
                const double damp = opt.absorber_on ? std::exp(-w_[i] * inv_2hbar) : 1.0;
                psi[i] *= std::polar(damp, theta);
            }
            t += dt;
            if ((s + 1) % opt.store_stride == 0 || s + 1 == n_steps) store(t);
        }
        out.final_norm = norm_of(psi);
        out.psi = std::move(psi);
        return out;
    }

    // Small momentum kick followed by free oscillation; returns the measured
    // c.o.m. frequency (the in-trap calibration the experiment performs).
    double measure_com_frequency(const std::vector<Complex>& psi0, double velocity,
                                 double duration) const {
        std::vector<Complex> psi = psi0;
        const double kv = cfg_.atom.mass * velocity / constants::hbar;
        for (int i = 0; i < n_; ++i) psi[i] *= std::polar(1.0, kv * z_[i]);
        GpeConfig quiet = cfg_;
        quiet.drive.amplitude = 0.0;
        EvolveOptions opt;
        opt.duration = duration;
        opt.store_stride = 20;
        Gpe1D solver(quiet);
        const auto res = solver.evolve(psi, opt);
        // Rising zero crossings of com(t) - mean.
        double mean = 0.0;
        for (double c : res.com) mean += c;
        mean /= static_cast<double>(res.com.size());
        std::vector<double> crossings;
        for (size_t i = 1; i < res.com.size(); ++i) {
            const double a = res.com[i - 1] - mean;
            const double b = res.com[i] - mean;
            if (a < 0.0 && b >= 0.0)
                crossings.push_back(res.times[i - 1] +
                                    (a / (a - b)) * (res.times[i] - res.times[i - 1]));
        }
        if (crossings.size() < 2)
            throw ConvergenceError("measure_com_frequency: too few oscillations");
        return constants::two_pi * static_cast<double>(crossings.size() - 1) /
               (crossings.back() - crossings.front());
    }

private:
    void build_static_arrays() {
        v_static_.resize(n_);
        w_.resize(n_);
        const double m = cfg_.atom.mass;
        const double w0 = cfg_.potential.bare_frequency;
        for (int i = 0; i < n_; ++i) {
            const double dzc = z_[i] - cfg_.potential.bare_minimum;
            double v = 0.5 * m * w0 * w0 * dzc * dzc + cfg_.potential.energy_offset;
            if (cfg_.potential.gravity_on)
                v += m * constants::g_gravity * (z_[i] - cfg_.potential.surface_position);
            v_static_[i] = v;
        }
        // Absorber: cosine ramp from `start` down to the grid edge. A pure
        // harmonic configuration has no barrier and nothing to absorb.
        if (!has_surface_) {
            for (int i = 0; i < n_; ++i) w_[i] = 0.0;
            return;
        }
        const double start = analysis_.saddle_position - cfg_.absorber.offset_from_saddle;
        if (start <= cfg_.grid.z_min)
            throw PhysicsError("Gpe1D: absorber start below the grid; enlarge the grid");
        const double width = start - cfg_.grid.z_min;
        for (int i = 0; i < n_; ++i) {
            if (z_[i] < start) {
                w_[i] = absorber_strength_ * 0.5 *
                        (1.0 - std::cos(constants::pi * (start - z_[i]) / width));
            } else {
                w_[i] = 0.0;
            }
        }
    }

    void validate_resolution() const {
        const double dz = cfg_.grid.spacing();
        // Barrier width: saddle-to-minimum span must be resolved.
        if (has_surface_) {
            const double barrier_width = analysis_.minimum_position - analysis_.saddle_position;
            if (barrier_width / dz < 8.0)
                throw PhysicsError(
                    "Gpe1D: grid does not resolve the barrier width (need >= 8 points)");
        }
        // Healing length at the peak density estimate (Thomas-Fermi-ish);
        // only binding when interactions are on.
        if (cfg_.interaction_1d > 0.0) {
            const double aho = std::sqrt(constants::hbar /
                                         (cfg_.atom.mass * analysis_.effective_frequency));
            const double n_peak = cfg_.n_atoms / (2.0 * aho); // lower bound on the true width
            const double mu_int = cfg_.interaction_1d * n_peak;
            const double mu_scale =
                std::max(mu_int, constants::hbar * analysis_.effective_frequency);
            const double xi = constants::hbar / std::sqrt(2.0 * cfg_.atom.mass * mu_scale);
            if (xi / dz < 8.0)
                throw PhysicsError("Gpe1D: grid does not resolve the healing length "
                                   "(need >= 8 points)");
        }
        // Absorber must sit outside the trap region.
        if (has_surface_) {
            const double start = analysis_.saddle_position - cfg_.absorber.offset_from_saddle;
            if (start >= analysis_.saddle_position)
                throw PhysicsError("Gpe1D: absorber overlaps the trap region");
        }
    }

    double surface_term(double zeta) const {
        if (!cfg_.potential.surface_term) return 0.0;
        const auto& s = *cfg_.potential.surface_term;
        const double p = s.power();
        if (zeta < 1e-12) return floor_;
        double ip;
        if (p == 4.0) {
            const double z2 = zeta * zeta;
            ip = z2 * z2;
        } else if (p == 3.0) {
            ip = zeta * zeta * zeta;
        } else if (p == 1.0) {
            ip = zeta;
        } else {
            ip = std::pow(zeta, p);
        }
        return s.coefficient() / ip;
    }

    double potential_at(int i, double surface_shift) const {
        const double zeta = z_[i] - (cfg_.potential.surface_position + surface_shift);
        const double v = v_static_[i] + surface_term(zeta);
        return v < floor_ ? floor_ : v;
    }

    void build_potential(double surface_shift, std::vector<double>& vt) const {
        for (int i = 0; i < n_; ++i) vt[i] = potential_at(i, surface_shift);
    }

    void renormalize(std::vector<Complex>& psi) const {
        const double scale = std::sqrt(cfg_.n_atoms / norm_of(psi));
        for (auto& c : psi) c *= scale;
    }

    void fft_forward(std::vector<Complex>& data) const {
        fftw_execute_dft(plan_fwd_, reinterpret_cast<fftw_complex*>(data.data()),
                         reinterpret_cast<fftw_complex*>(data.data()));
    }
    // Backward transform without the 1/n scaling; callers fold it into their
    // per-bin factors.
    void fft_backward_unscaled(std::vector<Complex>& data) const {
        fftw_execute_dft(plan_bwd_, reinterpret_cast<fftw_complex*>(data.data()),
                         reinterpret_cast<fftw_complex*>(data.data()));
    }

    GpeConfig cfg_;
    int n_;
    trapscape::TrapAnalysis analysis_;
    bool has_surface_ = false;
    double floor_ = 0.0;
    double absorber_strength_ = 0.0;
    std::vector<double> z_, k2_, v_static_, w_;
    mutable std::vector<Complex> buf_;
    fftw_plan plan_fwd_{};
    fftw_plan plan_bwd_{};
};

// --- observables built on the solver ---------------------------------------

// Remaining-atom contrast C = (N_r - N_a)/N_r between an undriven reference
// run and a driven run of equal duration.
inline double contrast(const GpeConfig& cfg, const std::vector<Complex>& psi0, double b,
                       double duration) {
    GpeConfig ref = cfg;
    ref.drive.amplitude = 0.0;
    GpeConfig driven = cfg;
    driven.drive.amplitude = b;
    Gpe1D s_ref(ref);
    Gpe1D s_drv(driven);
    Gpe1D::EvolveOptions opt;
    opt.duration = duration;
    const double n_ref = s_ref.evolve(psi0, opt).final_norm;
    const double n_drv = s_drv.evolve(psi0, opt).final_norm;
    if (!(n_ref > 0.0)) return 1.0;
    double c = (n_ref - n_drv) / n_ref;
    if (c < 0.0 && c > -1e-9) c = 0.0;
    return c;
}

struct ContrastRow {
    double amplitude = 0.0; // m
    double contrast = 0.0;
};

inline std::vector<ContrastRow> contrast_curve(const GpeConfig& cfg,
                                               const std::vector<double>& b_grid,
                                               double duration) {
    for (size_t i = 1; i < b_grid.size(); ++i)
        if (!(b_grid[i] > b_grid[i - 1]))
            throw PhysicsError("contrast_curve: amplitude grid must be strictly increasing");
    Gpe1D solver(cfg);
    const auto gs = solver.ground_state();
    std::vector<ContrastRow> rows;
    rows.reserve(b_grid.size());
    for (double b : b_grid) rows.push_back({b, contrast(cfg, gs.psi, b, duration)});
    return rows;
}

// Lorentzian amplitude response of the driven cantilever, normalized to 1 on
// resonance: the sweep-by-frequency envelope.
inline double cantilever_response(double omega_p, double omega_m, double quality_factor) {
    const double gamma = omega_m / quality_factor;
    const double delta = omega_p - omega_m;
    return 0.5 * gamma / std::sqrt(delta * delta + 0.25 * gamma * gamma);
}

struct ResonanceRow {
    double omega_p = 0.0;     // rad/s
    double b_effective = 0.0; // m after the cantilever envelope
    double contrast = 0.0;
};

// Fig-3a-style drive-frequency scan. With `envelope_q > 0`, the cantilever
// amplitude follows its Lorentzian response around omega_m.
inline std::vector<ResonanceRow> resonance_scan(const GpeConfig& cfg,
                                                const std::vector<double>& omega_p_grid,
                                                double b_resonant, double omega_m,
                                                double envelope_q, double duration) {
    GpeConfig quiet = cfg;
    quiet.drive.amplitude = 0.0;
    Gpe1D solver(quiet);
    const auto gs = solver.ground_state();
    Gpe1D::EvolveOptions opt;
    opt.duration = duration;
    const double n_ref = solver.evolve(gs.psi, opt).final_norm;
    std::vector<ResonanceRow> rows;
    for (double wp : omega_p_grid) {
        ResonanceRow row;
        row.omega_p = wp;
        row.b_effective = envelope_q > 0.0
                              ? b_resonant * cantilever_response(wp, omega_m, envelope_q)
                              : b_resonant;
        GpeConfig driven = cfg;
        driven.drive.amplitude = row.b_effective;
        driven.drive.omega = wp;
        Gpe1D s2(driven);
        const double n_drv = s2.evolve(gs.psi, opt).final_norm;
        row.contrast = n_ref > 0.0 ? (n_ref - n_drv) / n_ref : 1.0;
        rows.push_back(row);
    }
    return rows;
}

struct SpectroscopyRow {
    double omega_nominal = 0.0;  // rad/s, trap design frequency
    double omega_measured = 0.0; // rad/s, small-kick c.o.m. frequency in that trap
    double contrast = 0.0;
};

struct SpectroscopyResult {
    std::vector<SpectroscopyRow> rows;
    std::vector<double> peak_omega_measured; // rad/s, interpolated local maxima
};

// BEC response against trap frequency at fixed resonant drive. The trap is
// re-solved per point by the caller-provided factory (matched barrier
// depth); the measured small-amplitude c.o.m. frequency is reported
// alongside the nominal design value, mirroring the experiment's trap
// calibration.
template <typename ConfigFactory>
SpectroscopyResult mode_spectroscopy(ConfigFactory&& config_for_omega,
                                     const std::vector<double>& omega_a_grid,
                                     double drive_amplitude, double omega_p,
                                     double duration) {
    SpectroscopyResult out;
    for (double wa : omega_a_grid) {
        GpeConfig cfg = config_for_omega(wa);
        cfg.drive.amplitude = 0.0;
        Gpe1D solver(cfg);
        const auto gs = solver.ground_state();
        SpectroscopyRow row;
        row.omega_nominal = wa;
        // Kick small enough to stay harmonic: c.o.m. swing of 0.02 a_ho.
        const double kick = 0.02 * std::sqrt(constants::hbar * wa / cfg.atom.mass);
        row.omega_measured =
            solver.measure_com_frequency(gs.psi, kick, 6.0 * constants::two_pi / wa);
        row.contrast = contrast(cfg, gs.psi, drive_amplitude, duration);
        out.rows.push_back(row);
    }
    // Local maxima with parabolic refinement on the measured axis.
    double cmax = 0.0;
    for (const auto& r : out.rows) cmax = std::max(cmax, r.contrast);
    for (size_t i = 1; i + 1 < out.rows.size(); ++i) {
        const double c0 = out.rows[i - 1].contrast;
        const double c1 = out.rows[i].contrast;
        const double c2 = out.rows[i + 1].contrast;
        if (c1 >= c0 && c1 > c2 && c1 > 0.25 * cmax && c1 > 1e-3) {
            double w = out.rows[i].omega_measured;
            const double denom = c0 - 2.0 * c1 + c2;
            if (denom < 0.0) {
                const double shift = 0.5 * (c0 - c2) / denom;
                if (std::abs(shift) < 1.0) {
                    const double dw = 0.5 * (out.rows[i + 1].omega_measured -
                                             out.rows[i - 1].omega_measured);
                    w += shift * dw;
                }
            }
            out.peak_omega_measured.push_back(w);
        }
    }
    return out;
}

// Binary-free snapshot rows: z, |psi|^2, Re psi, Im psi.
inline std::string snapshot_csv_header() { return "z_m,density_per_m,re_psi,im_psi"; }

inline std::string snapshot_csv_row(double z, const Complex& c) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g", z, std::norm(c), c.real(),
                  c.imag());
    return buf;
}

} // namespace hybridsim::gpe

#endif
