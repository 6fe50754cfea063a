#ifndef HYBRIDSIM_PAPERCHECK_HPP
#define HYBRIDSIM_PAPERCHECK_HPP

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hybridsim/gpe.hpp"
#include "hybridsim/physcore.hpp"
#include "hybridsim/report.hpp"
#include "hybridsim/scenario.hpp"
#include "hybridsim/schemes.hpp"
#include "hybridsim/trapscape.hpp"

// Regression suite against the reference scenario values. Every row pins a
// preset, a computed quantity, the target and its tolerance; the CLI
// `paper-check` command runs them all and fails on any miss.
namespace hybridsim::papercheck {

struct CheckRow {
    std::string id;
    std::string preset;
    std::string description;
    double target = 0.0;
    double computed = 0.0;
    std::string tolerance;
    bool pass = false;
    bool slow = false;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["id"] = id;
        j["preset"] = preset;
        j["description"] = description;
        j["target"] = target;
        j["computed"] = computed;
        j["tolerance"] = tolerance;
        j["pass"] = pass;
        return j;
    }
};

class Context {
public:
    explicit Context(std::filesystem::path preset_dir)
        : preset_dir_(std::move(preset_dir)),
          species_(io::load_species_table(scenario::species_table_path(preset_dir_))) {}

    const std::filesystem::path& preset_dir() const { return preset_dir_; }
    const std::map<std::string, AtomSpecies>& species() const { return species_; }

    const scenario::Scenario& scenario_for(const std::string& preset) {
        auto it = scenarios_.find(preset);
        if (it == scenarios_.end()) {
            auto s = scenario::load_scenario(preset_dir_ / (preset + ".json"));
            it = scenarios_.emplace(preset, std::move(s)).first;
        }
        return it->second;
    }

    // Budget-level run with the gpe block stripped (the GPE checks drive the
    // solver themselves).
    const report::RunResult& run_for(const std::string& preset) {
        auto it = runs_.find(preset);
        if (it == runs_.end()) {
            scenario::Scenario s = scenario_for(preset);
            s.doc.erase("gpe");
            it = runs_.emplace(preset, report::run_scenario(s, species_)).first;
        }
        return it->second;
    }

    const AtomSpecies& species_named(const std::string& name) const {
        return species_.at(name);
    }

private:
    std::filesystem::path preset_dir_;
    std::map<std::string, AtomSpecies> species_;
    std::map<std::string, scenario::Scenario> scenarios_;
    std::map<std::string, report::RunResult> runs_;
};

namespace detail {

inline bool within_rel(double computed, double target, double rel) {
    return std::abs(computed - target) <= rel * std::abs(target);
}
inline bool within_abs(double computed, double target, double abs_tol) {
    return std::abs(computed - target) <= abs_tol;
}
inline bool within_factor(double computed, double target, double factor) {
    if (!(computed > 0.0) || !(target > 0.0)) return false;
    const double r = computed / target;
    return r <= factor && r >= 1.0 / factor;
}

} // namespace detail

struct Check {
    std::string id;
    std::string preset;
    bool slow = false;
    std::function<CheckRow(Context&)> run;
};

inline std::vector<Check> registry();

inline CheckRow execute(const Check& c, Context& ctx) {
    CheckRow row = c.run(ctx);
    row.id = c.id;
    row.preset = c.preset;
    row.slow = c.slow;
    return row;
}

// ---------------------------------------------------------------------------

inline std::vector<Check> registry() {
    using namespace hybridsim::physcore;
    std::vector<Check> checks;

    checks.push_back({"gamma_m_dec_cryo_4k", "none", false, [](Context&) {
        CheckRow r;
        r.description = "mechanical decoherence rate at T=4 K, Q=1e5";
        r.computed = angular_to_hz(mechanical_decoherence_rate(1e5, 4.0));
        r.target = 0.84e6;
        r.tolerance = "abs 0.2e6 Hz";
        r.pass = detail::within_abs(r.computed, r.target, 0.2e6);
        return r;
    }});
    checks.push_back({"gamma_m_dec_cryo_10mk", "none", false, [](Context&) {
        CheckRow r;
        r.description = "mechanical decoherence rate at T=10 mK, Q=1e7";
        r.computed = angular_to_hz(mechanical_decoherence_rate(1e7, 0.01));
        r.target = 21.0;
        r.tolerance = "abs 2 Hz";
        r.pass = detail::within_abs(r.computed, r.target, 2.0);
        return r;
    }});
    checks.push_back({"ion_voltage_90v", "ion_be9", false, [](Context& ctx) {
        CheckRow r;
        r.description = "tip voltage for unit coupling parameter";
        r.computed = ctx.run_for("ion_be9").report.at("ion").at("required_voltage_v").get<double>();
        r.target = 90.0;
        r.tolerance = "rel 5%";
        r.pass = detail::within_rel(r.computed, r.target, 0.05);
        return r;
    }});
    checks.push_back({"ion_g0_150hz", "ion_be9", false, [](Context& ctx) {
        CheckRow r;
        r.description = "ion single-phonon coupling rate";
        r.computed = ctx.run_for("ion_be9").report.at("budget").at("g0_hz").get<double>();
        r.target = 150.0;
        r.tolerance = "rel 20%";
        r.pass = detail::within_rel(r.computed, r.target, 0.20);
        return r;
    }});
    checks.push_back({"bec_eps_max_pure_cp", "bec_cantilever", false, [](Context& ctx) {
        CheckRow r;
        r.description = "max |eps| over distance for the pure surface potential, 10 kHz bare trap";
        const auto& scn = ctx.scenario_for("bec_cantilever");
        const double c4 = scn.doc.at("parameters").at("c4_jm4").get<double>();
        const auto species = scenario::resolve_species(scn, ctx.species());
        trapscape::SweepConfig cfg(species,
                                   potentials::CouplingPotential::casimir_polder(c4),
                                   hz_to_angular(10e3));
        cfg.mode = trapscape::SweepMode::fixed_bare;
        const double d_crit = trapscape::critical_distance(cfg);
        r.computed = std::abs(cfg.surface.derivative_unchecked(2, d_crit)) /
                     (species.mass * cfg.omega_design * cfg.omega_design);
        r.target = 0.30;
        r.tolerance = "range [0.25, 0.35]";
        r.pass = r.computed >= 0.25 && r.computed <= 0.35;
        return r;
    }});
    checks.push_back({"bec_eps_preset", "bec_cantilever", false, [](Context& ctx) {
        CheckRow r;
        r.description = "|eps| of the experiment preset at barrier 8 hbar omega";
        r.computed = std::abs(
            ctx.run_for("bec_cantilever").report.at("budget").at("epsilon").get<double>());
        r.target = 0.15;
        r.tolerance = "range [0.10, 0.20]";
        r.pass = r.computed >= 0.10 && r.computed <= 0.20;
        return r;
    }});
    checks.push_back({"bec_g0_factor2p5", "bec_cantilever", false, [](Context& ctx) {
        CheckRow r;
        r.description = "single-atom coupling rate of the experiment preset "
                        "(reference value known to sit a factor ~2 above the Eq-10 evaluation)";
        r.computed = std::abs(
            ctx.run_for("bec_cantilever").report.at("budget").at("g0_hz").get<double>());
        r.target = 2.5e-4;
        r.tolerance = "factor 2.5";
        r.pass = detail::within_factor(r.computed, r.target, 2.5);
        return r;
    }});
    checks.push_back({"tof_amplitude_400nm", "bec_cantilever", false, [](Context& ctx) {
        CheckRow r;
        r.description = "time-of-flight displacement of |alpha|=1, N=100, 100 Hz trap, 4 ms";
        r.computed = schemes::tof_detection_amplitude(ctx.species_named("Rb87"), 100.0,
                                                      hz_to_angular(100.0), 1.0, 4e-3);
        r.target = 400e-9;
        r.tolerance = "rel 10%";
        r.pass = detail::within_rel(r.computed, r.target, 0.10);
        return r;
    }});
    checks.push_back({"cnt_bth_4um", "cnt_collective", false, [](Context&) {
        CheckRow r;
        r.description = "nanotube room-temperature thermal amplitude";
        r.computed = thermal_amplitude(2e-20, hz_to_angular(20e3), 300.0);
        r.target = 4e-6;
        r.tolerance = "rel 15%";
        r.pass = detail::within_rel(r.computed, r.target, 0.15);
        return r;
    }});
    checks.push_back({"cnt_bqm_0p2nm", "cnt_collective", false, [](Context&) {
        CheckRow r;
        r.description = "nanotube zero-point amplitude";
        r.computed = zero_point_amplitude(2e-20, hz_to_angular(20e3));
        r.target = 0.2e-9;
        r.tolerance = "rel 40%";
        r.pass = detail::within_rel(r.computed, r.target, 0.40);
        return r;
    }});
    checks.push_back({"cantilever_ath_0p4nm", "bec_cantilever", false, [](Context&) {
        CheckRow r;
        r.description = "cantilever room-temperature thermal amplitude";
        r.computed = thermal_amplitude(5e-12, hz_to_angular(10e3), 300.0);
        r.target = 0.4e-9;
        r.tolerance = "rel 15%";
        r.pass = detail::within_rel(r.computed, r.target, 0.15);
        return r;
    }});
    checks.push_back({"cnt_nth_order_1e3", "cnt_single", false, [](Context&) {
        CheckRow r;
        r.description = "nanotube thermal occupation at 10 mK (250 kHz mode)";
        r.computed = thermal_occupation(hz_to_angular(250e3), 0.01);
        r.target = 1e3;
        r.tolerance = "factor 3.5";
        r.pass = detail::within_factor(r.computed, r.target, 3.5);
        return r;
    }});
    checks.push_back({"cnt_collective_gn", "cnt_collective", false, [](Context& ctx) {
        CheckRow r;
        r.description = "collective coupling rate per unit eps, N=500 nanotube";
        r.computed =
            ctx.run_for("cnt_collective").report.at("cnt").at("gN_per_epsilon_hz").get<double>();
        r.target = 780.0;
        r.tolerance = "rel 35%";
        r.pass = detail::within_rel(r.computed, r.target, 0.35);
        return r;
    }});
    checks.push_back({"cnt_collective_gamma_m", "cnt_collective", false, [](Context& ctx) {
        CheckRow r;
        r.description = "nanotube decoherence rate, Q=1e6 at 10 mK";
        r.computed =
            ctx.run_for("cnt_collective").report.at("budget").at("gamma_m_dec_hz").get<double>();
        r.target = 210.0;
        r.tolerance = "rel 10%";
        r.pass = detail::within_rel(r.computed, r.target, 0.10);
        return r;
    }});
    checks.push_back({"cnt_collective_gamma_a", "cnt_collective", false, [](Context& ctx) {
        CheckRow r;
        r.description = "collective atomic decoherence rate (three-body loss input)";
        r.computed =
            ctx.run_for("cnt_collective").report.at("budget").at("gamma_a_dec_hz").get<double>();
        r.target = 13.0;
        r.tolerance = "rel 1e-9 (input echo)";
        r.pass = detail::within_rel(r.computed, r.target, 1e-9);
        return r;
    }});
    checks.push_back({"cnt_single_g0", "cnt_single", false, [](Context& ctx) {
        CheckRow r;
        r.description = "single-atom coupling rate per unit eps, 4.25 um nanotube";
        r.computed =
            ctx.run_for("cnt_single").report.at("cnt").at("gN_per_epsilon_hz").get<double>();
        r.target = 800.0;
        r.tolerance = "rel 35%";
        r.pass = detail::within_rel(r.computed, r.target, 0.35);
        return r;
    }});
    checks.push_back({"cnt_single_gamma_m", "cnt_single", false, [](Context& ctx) {
        CheckRow r;
        r.description = "nanotube decoherence rate (single-atom scenario)";
        r.computed =
            ctx.run_for("cnt_single").report.at("budget").at("gamma_m_dec_hz").get<double>();
        r.target = 210.0;
        r.tolerance = "rel 10%";
        r.pass = detail::within_rel(r.computed, r.target, 0.10);
        return r;
    }});
    checks.push_back({"cnt_single_gamma_a", "cnt_single", false, [](Context& ctx) {
        CheckRow r;
        r.description = "single-atom decoherence rate (input echo)";
        r.computed =
            ctx.run_for("cnt_single").report.at("budget").at("gamma_a_dec_hz").get<double>();
        r.target = 1.0;
        r.tolerance = "rel 1e-9 (input echo)";
        r.pass = detail::within_rel(r.computed, r.target, 1e-9);
        return r;
    }});
    checks.push_back({"cnt_cp_eps_order_1e-2", "cnt_collective", false, [](Context& ctx) {
        CheckRow r;
        r.description = "eps of the scaled surface potential at resonant trap depth";
        r.computed = std::abs(
            ctx.run_for("cnt_collective").report.at("budget").at("epsilon").get<double>());
        r.target = 1e-2;
        r.tolerance = "factor 3.5";
        r.pass = detail::within_factor(r.computed, r.target, 3.5);
        return r;
    }});
    checks.push_back({"eps_depth_ordering_beta", "bec_cantilever", false, [](Context& ctx) {
        CheckRow r;
        r.description = "eps at barrier 10 hbar omega: beta=200 exceeds beta=1";
        const auto& scn = ctx.scenario_for("bec_cantilever");
        const double c4 = scn.doc.at("parameters").at("c4_jm4").get<double>();
        const auto species = scenario::resolve_species(scn, ctx.species());
        auto eps_at = [&](double beta) {
            trapscape::SweepConfig cfg(
                species, potentials::CouplingPotential::scaled_casimir_polder(c4, beta),
                hz_to_angular(10e3));
            const auto rows = trapscape::epsilon_vs_barrier(cfg, {10.0});
            return std::abs(rows.front().epsilon);
        };
        const double e200 = eps_at(200.0);
        const double e1 = eps_at(1.0);
        r.computed = e200;
        r.target = e1;
        r.tolerance = "ordering e(beta=200) > e(beta=1), and e(beta=200) > 0.1";
        r.pass = e200 > e1 && e200 > 0.1;
        return r;
    }});
    checks.push_back({"lattice_gn_3khz", "lattice_membrane", false, [](Context& ctx) {
        CheckRow r;
        r.description = "collectively enhanced lattice coupling rate";
        r.computed = ctx.run_for("lattice_membrane").report.at("budget").at("gN_hz").get<double>();
        r.target = 3000.0;
        r.tolerance = "rel 15%";
        r.pass = detail::within_rel(r.computed, r.target, 0.15);
        return r;
    }});
    checks.push_back({"lattice_cooling_1e4", "lattice_membrane", false, [](Context& ctx) {
        CheckRow r;
        r.description = "sympathetic cooling factor (documented gamma_a_cool choice)";
        r.computed =
            ctx.run_for("lattice_membrane").report.at("lattice").at("cooling_factor").get<double>();
        r.target = 1e4;
        r.tolerance = "order of magnitude [1e3, 1e5]";
        r.pass = r.computed >= 1e3 && r.computed <= 1e5;
        return r;
    }});
    checks.push_back({"lattice_gm_ratio_exact", "lattice_membrane", false, [](Context& ctx) {
        CheckRow r;
        r.description = "membrane-side coupling reduction g_m/g_N = R";
        const auto& rep = ctx.run_for("lattice_membrane").report;
        r.computed = rep.at("lattice").at("g_m_over_gN").get<double>();
        r.target = 0.3;
        r.tolerance = "abs 1e-12 (exact)";
        r.pass = detail::within_abs(r.computed, r.target, 1e-12);
        return r;
    }});
    checks.push_back({"magnetic_g0_60hz", "magnetic_rb87", false, [](Context& ctx) {
        CheckRow r;
        r.description = "spin-phonon coupling from geometry-derived magnet and cantilever mass";
        r.computed = ctx.run_for("magnetic_rb87").report.at("budget").at("g0_hz").get<double>();
        r.target = 60.0;
        r.tolerance = "factor 2 (geometry-derived masses documented)";
        r.pass = detail::within_factor(r.computed, r.target, 2.0);
        return r;
    }});
    checks.push_back({"magnetic_two_photon_3x", "magnetic_rb87", false, [](Context& ctx) {
        CheckRow r;
        r.description = "two-photon drive reduces the coupling by exactly 3";
        auto params = scenario::build_magnetic(ctx.scenario_for("magnetic_rb87"),
                                               ctx.species_named("Rb87"));
        params.two_photon = false;
        const double g_single = schemes::magnetic_budget(params).budget.g0;
        params.two_photon = true;
        const double g_two = schemes::magnetic_budget(params).budget.g0;
        r.computed = g_single / g_two;
        r.target = 3.0;
        r.tolerance = "rel 1e-12 (exact)";
        r.pass = detail::within_rel(r.computed, r.target, 1e-12);
        return r;
    }});
    checks.push_back({"magnetic_resonance_b0", "magnetic_rb87", false, [](Context& ctx) {
        CheckRow r;
        r.description = "Larmor frequency at the reported resonance field equals omega_m";
        auto params = scenario::build_magnetic(ctx.scenario_for("magnetic_rb87"),
                                               ctx.species_named("Rb87"));
        const auto res = schemes::magnetic_budget(params);
        const double wl = constants::mu_B * params.state_pair.g_factor * res.resonance_b0 /
                          constants::hbar;
        r.computed = wl / params.cantilever.frequency;
        r.target = 1.0;
        r.tolerance = "rel 1e-12";
        r.pass = detail::within_rel(r.computed, r.target, 1e-12);
        return r;
    }});
    checks.push_back({"magnetic_transfer_identity", "magnetic_rb87", false, [](Context& ctx) {
        CheckRow r;
        r.description = "transfer time identity t 2 g0 sqrt(N) / pi = 1";
        const auto& rep = ctx.run_for("magnetic_rb87").report;
        const double t = rep.at("magnetic").at("transfer_time_s").get<double>();
        const double g0 = hz_to_angular(rep.at("budget").at("g0_hz").get<double>());
        r.computed = t * 2.0 * g0 / constants::pi;
        r.target = 1.0;
        r.tolerance = "rel 1e-12";
        r.pass = detail::within_rel(r.computed, r.target, 1e-12);
        return r;
    }});

    // --- GPE-backed checks (slow) ------------------------------------------

    checks.push_back({"gpe_mu_below_barrier", "bec_cantilever", true, [](Context& ctx) {
        CheckRow r;
        r.description = "condensate chemical potential sits below the barrier";
        const auto& scn = ctx.scenario_for("bec_cantilever");
        const auto params = scenario::build_bec_surface(scn, scenario::resolve_species(scn, ctx.species()));
        const auto gs = scenario::build_gpe_settings(scn);
        auto cfg = scenario::make_gpe_config(params, gs,
                                             params.omega_target * gs.trap_tune_factor);
        gpe::Gpe1D solver(cfg);
        const auto ground = solver.ground_state();
        const double v_min = cfg.potential.value(solver.analysis().equilibrium_distance);
        const double hw = constants::hbar * solver.analysis().effective_frequency;
        r.computed = (ground.chemical_potential - v_min) / hw;
        r.target = solver.analysis().barrier_over_hbar_omega;
        r.tolerance = "mu_c < U0";
        r.pass = r.computed < r.target;
        return r;
    }});
    checks.push_back({"gpe_loss_resonance_centered", "bec_cantilever", true, [](Context& ctx) {
        CheckRow r;
        r.description = "drive-frequency scan through the cantilever response peaks at omega_m";
        const auto& scn = ctx.scenario_for("bec_cantilever");
        const auto params = scenario::build_bec_surface(scn, scenario::resolve_species(scn, ctx.species()));
        const auto gs = scenario::build_gpe_settings(scn);
        auto cfg = scenario::make_gpe_config(params, gs,
                                             params.omega_target * gs.trap_tune_factor);
        const double wm = params.oscillator.frequency;
        const double gam = wm / params.oscillator.quality_factor;
        const std::vector<double> grid = {wm - 8 * gam, wm - 3 * gam, wm, wm + 3 * gam,
                                          wm + 8 * gam};
        const auto rows = gpe::resonance_scan(cfg, grid, gs.drive.amplitude, wm,
                                              params.oscillator.quality_factor, gs.duration);
        size_t imax = 0;
        for (size_t i = 1; i < rows.size(); ++i)
            if (rows[i].contrast > rows[imax].contrast) imax = i;
        const double edge = std::max(rows.front().contrast, rows.back().contrast);
        r.computed = rows[imax].omega_p / wm;
        r.target = 1.0;
        r.tolerance = "peak at the center point and center > 2x edges";
        r.pass = (imax == grid.size() / 2) && rows[imax].contrast > 2.0 * edge;
        return r;
    }});
    checks.push_back({"gpe_offresonant_ordering", "bec_cantilever", true, [](Context& ctx) {
        CheckRow r;
        r.description = "resonant trap loses more atoms than the detuned 4 kHz trap";
        const auto& scn = ctx.scenario_for("bec_cantilever");
        const auto params = scenario::build_bec_surface(scn, scenario::resolve_species(scn, ctx.species()));
        const auto gs = scenario::build_gpe_settings(scn);
        const double wm = params.oscillator.frequency;

        auto cfg_res = scenario::make_gpe_config(params, gs,
                                                 params.omega_target * gs.trap_tune_factor);
        gpe::Gpe1D solver_res(cfg_res);
        const auto g_res = solver_res.ground_state();
        const double c_res = gpe::contrast(cfg_res, g_res.psi, gs.drive.amplitude, gs.duration);

        auto cfg_det = scenario::make_gpe_config(params, gs, hz_to_angular(4e3));
        cfg_det.drive.omega = wm; // cantilever still driven at its own resonance
        gpe::Gpe1D solver_det(cfg_det);
        const auto g_det = solver_det.ground_state();
        const double c_det = gpe::contrast(cfg_det, g_det.psi, gs.drive.amplitude, gs.duration);

        r.computed = c_res;
        r.target = c_det;
        r.tolerance = "ordering C(resonant) > C(4 kHz)";
        r.pass = c_res > c_det;
        return r;
    }});

    return checks;
}

struct Summary {
    std::vector<CheckRow> rows;
    bool all_pass = true;
};

inline Summary run_all(Context& ctx, bool include_slow = true) {
    Summary s;
    for (const auto& c : registry()) {
        if (c.slow && !include_slow) continue;
        CheckRow row;
        try {
            row = execute(c, ctx);
        } catch (const std::exception& e) {
            row.id = c.id;
            row.preset = c.preset;
            row.description = std::string("exception: ") + e.what();
            row.pass = false;
        }
        s.rows.push_back(row);
        if (!row.pass) s.all_pass = false;
    }
    return s;
}

inline std::vector<CheckRow> rows_for_preset(Context& ctx, const std::string& preset,
                                             bool include_slow) {
    std::vector<CheckRow> rows;
    for (const auto& c : registry()) {
        if (c.preset != preset) continue;
        if (c.slow && !include_slow) continue;
        try {
            rows.push_back(execute(c, ctx));
        } catch (const std::exception& e) {
            CheckRow row;
            row.id = c.id;
            row.preset = c.preset;
            row.description = std::string("exception: ") + e.what();
            row.pass = false;
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace hybridsim::papercheck

#endif
