#ifndef HYBRIDSIM_DYNAMICS_QUANTUM_HPP
#define HYBRIDSIM_DYNAMICS_QUANTUM_HPP

#include <cmath>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hybridsim/constants.hpp"
#include "hybridsim/errors.hpp"

// Quantum evolution of the linearized coupled system in truncated Fock
// space: beam-splitter, Jaynes-Cummings and Tavis-Cummings Hamiltonians with
// Lindblad dissipation. Hamiltonians are specified in angular-frequency
// units (H/hbar); all rates in rad/s.
namespace hybridsim::dynamics {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// --- operators ------------------------------------------------------------

inline Matrix destroy_op(int dim) {
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

inline Matrix number_op(int dim) {
    Matrix n = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

inline Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

// Collective lowering operator in the symmetric (Dicke) sector of N spins,
// basis |j,m> with j=N/2, m=-j..j (dimension N+1, index k = m+j).
inline Matrix dicke_lowering(int n_atoms) {
    const int dim = n_atoms + 1;
    const double j = 0.5 * n_atoms;
    Matrix jm = Matrix::Zero(dim, dim);
    for (int k = 1; k < dim; ++k) {
        const double m = -j + k;
        jm(k - 1, k) = std::sqrt((j + m) * (j - m + 1.0));
    }
    return jm;
}

// --- state ------------------------------------------------------------/---

enum class AtomSector { two_level, fock, dicke };

struct QuantumBasis {
    AtomSector atom_sector = AtomSector::two_level;
    int atom_dim = 2;   // 2 for two_level, cutoff for fock, N+1 for dicke
    int mech_dim = 2;   // mechanical Fock cutoff
    int n_atoms = 1;    // dicke sector size

    int dim() const { return atom_dim * mech_dim; }
};

// Design-decision cutoff: max(20, 8 (n_th+1)); checked post hoc.
inline int suggested_mech_cutoff(double n_th_target) {
    const int c = static_cast<int>(std::ceil(8.0 * (n_th_target + 1.0)));
    return c < 20 ? 20 : c;
}

struct QuantumState {
    QuantumBasis basis;
    Matrix rho;

    static QuantumState pure(const QuantumBasis& basis, const Eigen::VectorXcd& psi) {
        QuantumState s;
        s.basis = basis;
        s.rho = psi * psi.adjoint();
        return s;
    }

    // |atom_index> x |mech_index>
    static QuantumState basis_state(const QuantumBasis& basis, int atom_index, int mech_index) {
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.dim());
        psi(atom_index * basis.mech_dim + mech_index) = 1.0;
        return pure(basis, psi);
    }

    // Atom ground, mechanical mode thermal with mean occupation n_bar.
    static QuantumState mech_thermal(const QuantumBasis& basis, double n_bar) {
        Matrix rho_m = Matrix::Zero(basis.mech_dim, basis.mech_dim);
        double z = 0.0;
        for (int n = 0; n < basis.mech_dim; ++n)
            z += std::pow(n_bar / (n_bar + 1.0), n);
        for (int n = 0; n < basis.mech_dim; ++n)
            rho_m(n, n) = std::pow(n_bar / (n_bar + 1.0), n) / z;
        Matrix rho_a = Matrix::Zero(basis.atom_dim, basis.atom_dim);
        rho_a(0, 0) = 1.0;
        QuantumState s;
        s.basis = basis;
        s.rho = kron(rho_a, rho_m);
        return s;
    }

    double trace() const { return rho.trace().real(); }

    double purity() const { return (rho * rho).trace().real(); }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
        return es.eigenvalues().minCoeff();
    }

    double mech_occupation() const {
        const Matrix nb = kron(Matrix::Identity(basis.atom_dim, basis.atom_dim),
                               number_op(basis.mech_dim));
        return (rho * nb).trace().real();
    }

    double atom_excitation() const {
        Matrix na;
        switch (basis.atom_sector) {
            case AtomSector::two_level:
            case AtomSector::fock:
                na = number_op(basis.atom_dim);
                break;
            case AtomSector::dicke: {
                // (J_z + j): number of excited spins.
                na = Matrix::Zero(basis.atom_dim, basis.atom_dim);
                for (int k = 0; k < basis.atom_dim; ++k) na(k, k) = k;
                break;
            }
        }
        return (rho * kron(na, Matrix::Identity(basis.mech_dim, basis.mech_dim))).trace().real();
    }

    // Population of the two topmost mechanical Fock levels; the truncation
    // adequacy measure.
    double top_level_population() const {
        double pop = 0.0;
        for (int a = 0; a < basis.atom_dim; ++a)
            for (int n = basis.mech_dim - 2; n < basis.mech_dim; ++n) {
                const int i = a * basis.mech_dim + n;
                pop += rho(i, i).real();
            }
        return pop;
    }

    double mech_ground_population() const {
        double pop = 0.0;
        for (int a = 0; a < basis.atom_dim; ++a) {
            const int i = a * basis.mech_dim;
            pop += rho(i, i).real();
        }
        return pop;
    }

    void check_invariants(double tol_trace = 1e-8, double tol_pos = 1e-8,
                          double tol_top = 1e-6) const {
        if (std::abs(trace() - 1.0) > tol_trace)
            throw PhysicsError("QuantumState: trace deviates from 1");
        if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
            throw PhysicsError("QuantumState: density matrix not Hermitian");
        if (min_eigenvalue() < -tol_pos)
            throw PhysicsError("QuantumState: negative eigenvalue");
        if (top_level_population() > tol_top)
            throw ConvergenceError("QuantumState: population in top Fock levels exceeds 1e-6; "
                                   "increase mech cutoff (suggested_mech_cutoff)");
    }
};

// --- evolution specification ----------------------------------------------

struct BeamSplitter { double g = 0.0; };                       // g (a' b + a b')
struct JaynesCummings { double g = 0.0; double detuning = 0.0; }; // D s+s- + g (s+ b + s- b')
struct TavisCummings { double g = 0.0; int n_atoms = 1; };     // g (J+ b + J- b')

using HamiltonianSpec = std::variant<BeamSplitter, JaynesCummings, TavisCummings>;

enum class DissipatorChannel { mech_decay, atom_dephase, atom_decay };

struct Dissipator {
    DissipatorChannel channel = DissipatorChannel::mech_decay;
    double rate = 0.0;   // rad/s
    double n_th = 0.0;   // mech_decay bath occupation
};

struct EvolutionSpec {
    HamiltonianSpec hamiltonian;
    std::vector<Dissipator> dissipators;
    double duration = 0.0; // s
    double step = 0.0;     // s
    int store_stride = 10; // store every k-th step

    double max_rate() const {
        double r = 0.0;
        if (const auto* bs = std::get_if<BeamSplitter>(&hamiltonian)) r = std::abs(bs->g);
        if (const auto* jc = std::get_if<JaynesCummings>(&hamiltonian))
            r = std::max(std::abs(jc->g), std::abs(jc->detuning));
        if (const auto* tc = std::get_if<TavisCummings>(&hamiltonian)) r = std::abs(tc->g);
        for (const auto& dis : dissipators)
            r = std::max(r, dis.rate * (dis.n_th + 1.0));
        return r;
    }

    void validate() const {
        if (!(duration > 0.0) || !(step > 0.0))
            throw PhysicsError("EvolutionSpec: duration and step must be > 0");
        const double r = max_rate();
        if (r > 0.0 && step > 0.01 / r)
            throw PhysicsError("EvolutionSpec: step exceeds 0.01/max(rates)");
    }
};

struct QuantumTrajectory {
    std::vector<double> t;
    std::vector<double> mech_occupation;
    std::vector<double> atom_excitation;
    std::vector<double> trace;
    std::vector<double> purity;
    QuantumState final_state;

    std::string csv_header() const { return "t_s,n_mech,n_atom,trace,purity"; }
    std::string csv_row(size_t i) const {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g", t[i],
                      mech_occupation[i], atom_excitation[i], trace[i], purity[i]);
        return buf;
    }
};

// --- evolution --------------------------------------------------------/---

namespace detail {

inline Matrix build_hamiltonian(const QuantumBasis& basis, const HamiltonianSpec& spec) {
    const Matrix b = destroy_op(basis.mech_dim);
    const Matrix im = Matrix::Identity(basis.mech_dim, basis.mech_dim);
    const Matrix ia = Matrix::Identity(basis.atom_dim, basis.atom_dim);
    if (const auto* bs = std::get_if<BeamSplitter>(&spec)) {
        if (basis.atom_sector != AtomSector::fock)
            throw PhysicsError("beam_splitter needs a Fock atom sector");
        const Matrix a = destroy_op(basis.atom_dim);
        return bs->g * (kron(a.adjoint(), b) + kron(a, b.adjoint()));
    }
    if (const auto* jc = std::get_if<JaynesCummings>(&spec)) {
        if (basis.atom_sector != AtomSector::two_level || basis.atom_dim != 2)
            throw PhysicsError("jaynes_cummings needs a two-level atom sector");
        const Matrix sm = destroy_op(2); // |g><e|
        const Matrix sp = sm.adjoint();
        return jc->detuning * kron(sp * sm, im) +
               jc->g * (kron(sp, b) + kron(sm, b.adjoint()));
    }
    const auto& tc = std::get<TavisCummings>(spec);
    if (basis.atom_sector != AtomSector::dicke || basis.atom_dim != tc.n_atoms + 1)
        throw PhysicsError("tavis_cummings needs a Dicke sector of dimension N+1");
    const Matrix jm = dicke_lowering(tc.n_atoms);
    const Matrix jp = jm.adjoint();
    return tc.g * (kron(jp, b) + kron(jm, b.adjoint()));
    (void)ia;
}

inline std::vector<Matrix> build_lindblad_ops(const QuantumBasis& basis,
                                              const std::vector<Dissipator>& dissipators) {
    std::vector<Matrix> ops;
    const Matrix b = destroy_op(basis.mech_dim);
    const Matrix im = Matrix::Identity(basis.mech_dim, basis.mech_dim);
    const Matrix ia = Matrix::Identity(basis.atom_dim, basis.atom_dim);
    for (const auto& d : dissipators) {
        if (d.rate < 0.0) throw PhysicsError("Dissipator: rate must be >= 0");
        if (d.rate == 0.0) continue;
        switch (d.channel) {
            case DissipatorChannel::mech_decay: {
                // Thermal completion: downward gamma (n_th + 1), upward gamma n_th.
                ops.push_back(std::sqrt(d.rate * (d.n_th + 1.0)) * kron(ia, b));
                if (d.n_th > 0.0)
                    ops.push_back(std::sqrt(d.rate * d.n_th) * kron(ia, b.adjoint()));
                break;
            }
            case DissipatorChannel::atom_decay: {
                Matrix low;
                switch (basis.atom_sector) {
                    case AtomSector::two_level: low = destroy_op(2); break;
                    case AtomSector::fock: low = destroy_op(basis.atom_dim); break;
                    case AtomSector::dicke: low = dicke_lowering(basis.atom_dim - 1); break;
                }
                ops.push_back(std::sqrt(d.rate) * kron(low, im));
                break;
            }
            case DissipatorChannel::atom_dephase: {
                Matrix z;
                switch (basis.atom_sector) {
                    case AtomSector::two_level: {
                        z = Matrix::Zero(2, 2);
                        z(0, 0) = -1.0;
                        z(1, 1) = 1.0;
                        break;
                    }
                    case AtomSector::fock:
                        z = 2.0 * number_op(basis.atom_dim);
                        break;
                    case AtomSector::dicke: {
                        const int dim = basis.atom_dim;
                        const double j = 0.5 * (dim - 1);
                        z = Matrix::Zero(dim, dim);
                        for (int k = 0; k < dim; ++k) z(k, k) = 2.0 * (-j + k);
                        break;
                    }
                }
                ops.push_back(std::sqrt(d.rate / 2.0) * kron(z, im));
                break;
            }
        }
    }
    return ops;
}

} // namespace detail

// Fixed-step 4th-order integration of the Lindblad master equation
// drho/dt = -i[H,rho] + sum_k (L rho L' - {L'L, rho}/2).
inline QuantumTrajectory evolve_quantum(const QuantumState& initial, const EvolutionSpec& spec,
                                        bool check_each_store = true) {
    spec.validate();
    // Relaxed mode keeps the trace/positivity gates but tolerates thermal
    // tails in the top Fock levels (rate fits, not amplitude-accurate runs).
    initial.check_invariants(1e-8, 1e-8, check_each_store ? 1e-6 : 1.0);

    const Matrix h = detail::build_hamiltonian(initial.basis, spec.hamiltonian);
    const auto ls = detail::build_lindblad_ops(initial.basis, spec.dissipators);
    std::vector<Matrix> ldag_l;
    ldag_l.reserve(ls.size());
    for (const auto& l : ls) ldag_l.push_back(l.adjoint() * l);

    const Complex i_unit(0.0, 1.0);
    auto rhs = [&](const Matrix& rho) {
        Matrix d = -i_unit * (h * rho - rho * h);
        for (size_t k = 0; k < ls.size(); ++k) {
            d += ls[k] * rho * ls[k].adjoint();
            d -= 0.5 * (ldag_l[k] * rho + rho * ldag_l[k]);
        }
        return d;
    };

    const long n_steps = static_cast<long>(std::llround(spec.duration / spec.step));
    QuantumTrajectory traj;
    QuantumState state = initial;

    auto store = [&](double t) {
        traj.t.push_back(t);
        traj.mech_occupation.push_back(state.mech_occupation());
        traj.atom_excitation.push_back(state.atom_excitation());
        traj.trace.push_back(state.trace());
        traj.purity.push_back(state.purity());
        if (check_each_store) state.check_invariants(1e-7, 1e-7);
    };

    store(0.0);
    const double dt = spec.step;
    for (long s = 0; s < n_steps; ++s) {
        const Matrix k1 = rhs(state.rho);
        const Matrix k2 = rhs(state.rho + 0.5 * dt * k1);
        const Matrix k3 = rhs(state.rho + 0.5 * dt * k2);
        const Matrix k4 = rhs(state.rho + dt * k3);
        state.rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((s + 1) % spec.store_stride == 0 || s + 1 == n_steps)
            store(static_cast<double>(s + 1) * dt);
    }
    traj.final_state = state;
    return traj;
}

// --- protocols --------------------------------------------------------/---

struct SwapCoolResult {
    double n_before = 0.0;
    double n_after = 0.0;
    double transfer_fidelity = 0.0; // final mech ground-state population
    double interaction_time = 0.0;  // s
};

// State-swap cooling: atoms in |g>^N absorb the mechanical excitation over
// t = pi / (2 g sqrt(N)).
inline SwapCoolResult swap_cool(const QuantumState& initial, double g, int n_atoms,
                                const std::vector<Dissipator>& dissipators) {
    if (!(g > 0.0)) throw PhysicsError("swap_cool: g must be > 0");
    EvolutionSpec spec;
    if (n_atoms == 1 && initial.basis.atom_sector == AtomSector::two_level)
        spec.hamiltonian = JaynesCummings{g, 0.0};
    else
        spec.hamiltonian = TavisCummings{g, n_atoms};
    spec.dissipators = dissipators;
    spec.duration = constants::pi / (2.0 * g * std::sqrt(static_cast<double>(n_atoms)));
    spec.step = std::min(spec.duration / 400.0, 0.009 / spec.max_rate());
    SwapCoolResult out;
    out.interaction_time = spec.duration;
    out.n_before = initial.mech_occupation();
    const auto traj = evolve_quantum(initial, spec);
    out.n_after = traj.final_state.mech_occupation();
    out.transfer_fidelity = traj.final_state.mech_ground_population();
    return out;
}

// --- sympathetic-cooling cross-check ---------------------------------------

struct SympatheticCoolingParams {
    double g = 0.0;            // rad/s, atom-side coupling (g_N)
    double reflectivity = 1.0; // membrane-side coupling is R * g
    double gamma_a_cool = 0.0; // rad/s
    double gamma_m = 0.0;      // rad/s
    double n_mech_initial = 1.0;
    double duration = 0.0;     // s; 0 = auto (a few decay times)
};

struct SympatheticCoolingResult {
    double fitted_rate = 0.0;  // rad/s
    double formula_rate = 0.0; // rad/s, gamma_m + 4 R g^2 / gamma_a
    double relative_error = 0.0;
    std::string method;        // "lindblad" or "coupled_mode_ode"
};

namespace detail {

// Least-squares slope of log(y) vs t.
inline double log_slope(const std::vector<double>& t, const std::vector<double>& y) {
    double st = 0, sy = 0, stt = 0, sty = 0;
    size_t n = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (!(y[i] > 0.0)) continue;
        const double ly = std::log(y[i]);
        st += t[i];
        sy += ly;
        stt += t[i] * t[i];
        sty += t[i] * ly;
        ++n;
    }
    if (n < 3) throw ConvergenceError("log_slope: not enough positive samples");
    const double dn = static_cast<double>(n);
    return (dn * sty - st * sy) / (dn * stt - st * st);
}

} // namespace detail

// Weak-coupling comparison of the simulated membrane energy decay against
// Gamma_m = gamma_m + 4 R g^2 / gamma_a. Symmetric coupling runs the full
// two-mode Lindblad equation; the asymmetric case (R < 1: the membrane feels
// only the reflected force) runs the coupled-mode amplitude equations, which
// carry the same slow energy decay.
inline SympatheticCoolingResult sympathetic_cooling_crosscheck(
    const SympatheticCoolingParams& p) {
    if (!(p.gamma_a_cool > 0.0))
        throw PhysicsError("sympathetic_cooling_crosscheck: gamma_a_cool must be > 0");
    if (!(p.g < 0.25 * p.gamma_a_cool))
        throw PhysicsError(
            "sympathetic_cooling_crosscheck: requires the weak-coupling regime g < gamma_a/4; "
            "outside it the rate formula does not apply");
    SympatheticCoolingResult out;
    out.formula_rate = p.gamma_m + 4.0 * p.reflectivity * p.g * p.g / p.gamma_a_cool;
    const double t_end = p.duration > 0.0 ? p.duration : 3.0 / out.formula_rate;

    if (p.reflectivity == 1.0) {
        out.method = "lindblad";
        QuantumBasis basis;
        basis.atom_sector = AtomSector::fock;
        basis.atom_dim = 6;
        basis.mech_dim = 10;
        QuantumState st = QuantumState::mech_thermal(basis, p.n_mech_initial);
        EvolutionSpec spec;
        spec.hamiltonian = BeamSplitter{p.g};
        spec.dissipators = {{DissipatorChannel::atom_decay, p.gamma_a_cool, 0.0},
                            {DissipatorChannel::mech_decay, p.gamma_m, 0.0}};
        spec.duration = t_end;
        spec.step = 0.009 / spec.max_rate();
        spec.store_stride = 25;
        const auto traj = evolve_quantum(st, spec, false);
        out.fitted_rate = -detail::log_slope(traj.t, traj.mech_occupation);
    } else {
        out.method = "coupled_mode_ode";
        // da/dt = -gamma_a/2 a - i g b ;  db/dt = -gamma_m/2 b - i R g a
        Complex a(0.0, 0.0), b(std::sqrt(p.n_mech_initial), 0.0);
        const double dt = 0.005 / std::max({p.gamma_a_cool, p.g, p.gamma_m});
        const long n = static_cast<long>(std::ceil(t_end / dt));
        std::vector<double> ts, es;
        const Complex iu(0.0, 1.0);
        auto da = [&](Complex av, Complex bv) { return -0.5 * p.gamma_a_cool * av - iu * p.g * bv; };
        auto db = [&](Complex av, Complex bv) {
            return -0.5 * p.gamma_m * bv - iu * p.reflectivity * p.g * av;
        };
        for (long s = 0; s < n; ++s) {
            const Complex ka1 = da(a, b), kb1 = db(a, b);
            const Complex ka2 = da(a + 0.5 * dt * ka1, b + 0.5 * dt * kb1);
            const Complex kb2 = db(a + 0.5 * dt * ka1, b + 0.5 * dt * kb1);
            const Complex ka3 = da(a + 0.5 * dt * ka2, b + 0.5 * dt * kb2);
            const Complex kb3 = db(a + 0.5 * dt * ka2, b + 0.5 * dt * kb2);
            const Complex ka4 = da(a + dt * ka3, b + dt * kb3);
            const Complex kb4 = db(a + dt * ka3, b + dt * kb3);
            a += dt / 6.0 * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4);
            b += dt / 6.0 * (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4);
            if (s % 50 == 0) {
                ts.push_back(static_cast<double>(s + 1) * dt);
                es.push_back(std::norm(b));
            }
        }
        out.fitted_rate = -detail::log_slope(ts, es);
    }
    out.relative_error = std::abs(out.fitted_rate - out.formula_rate) / out.formula_rate;
    return out;
}

} // namespace hybridsim::dynamics

#endif
