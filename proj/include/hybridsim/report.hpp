#ifndef HYBRIDSIM_REPORT_HPP
#define HYBRIDSIM_REPORT_HPP

#include <map>
#include <string>

#include <json.hpp>

#include "hybridsim/io.hpp"
#include "hybridsim/scenario.hpp"

// Executes one scenario and assembles the report document plus any data
// tables (CSV bodies keyed by file suffix).
namespace hybridsim::report {

struct RunResult {
    nlohmann::ordered_json report;
    std::map<std::string, std::string> tables;
};

inline nlohmann::ordered_json trap_analysis_json(const trapscape::TrapAnalysis& a) {
    nlohmann::ordered_json j;
    j["vanished"] = a.vanished;
    if (!a.vanished) {
        j["equilibrium_distance_m"] = a.equilibrium_distance;
        j["minimum_position_m"] = a.minimum_position;
        j["effective_frequency_hz"] = angular_to_hz(a.effective_frequency);
        j["barrier_j"] = std::isinf(a.barrier_height) ? -1.0 : a.barrier_height;
        j["barrier_over_hbar_omega"] =
            std::isinf(a.barrier_over_hbar_omega) ? -1.0 : a.barrier_over_hbar_omega;
        j["epsilon"] = a.epsilon;
        j["bound_level_estimate"] = a.bound_level_estimate;
        j["n_minima"] = a.n_minima;
    }
    return j;
}

inline RunResult run_scenario(const scenario::Scenario& s,
                              const std::map<std::string, AtomSpecies>& species_table) {
    RunResult out;
    auto& rep = out.report;
    rep["meta"] = io::json_meta(s.hash);
    rep["scenario"] = nlohmann::ordered_json::parse(s.doc.dump());
    rep["name"] = s.name;
    rep["scheme"] = s.scheme;

    if (s.scheme == "cavity_reference") {
        const auto rec = scenario::build_cavity(s);
        nlohmann::ordered_json j;
        j["reported_g0_hz"] = angular_to_hz(rec.reported_g0);
        j["reported_frequency_hz"] = angular_to_hz(rec.reported_omega_m);
        j["reported_quality_factor"] = rec.reported_q;
        j["finesse"] = rec.finesse;
        j["note"] = rec.note;
        rep["cavity_record"] = j;
        return out;
    }

    const AtomSpecies species = scenario::resolve_species(s, species_table);

    if (s.scheme == "ion") {
        const auto params = scenario::build_ion(s, species);
        const auto r = schemes::ion_budget(params);
        rep["budget"] = r.budget.to_json();
        rep["ion"] = {{"required_voltage_v", r.required_voltage},
                      {"tip_charge_c", r.tip_charge},
                      {"delta_z_a_m", r.delta_z_a},
                      {"warnings", r.warnings}};
        out.tables["budget.csv"] = std::string(coupling::CouplingBudget::csv_header()) + "\n" +
                                   r.budget.csv_row() + "\n";
    } else if (s.scheme == "bec_surface") {
        const auto params = scenario::build_bec_surface(s, species);
        const auto r = schemes::bec_surface_budget(params);
        rep["budget"] = r.budget.to_json();
        rep["trap"] = trap_analysis_json(r.analysis);
        out.tables["budget.csv"] = std::string(coupling::CouplingBudget::csv_header()) + "\n" +
                                   r.budget.csv_row() + "\n";
        if (s.doc.contains("gpe")) {
            const auto gs = scenario::build_gpe_settings(s);
            const double omega_design = params.omega_target * gs.trap_tune_factor;
            auto cfg = scenario::make_gpe_config(params, gs, omega_design);
            gpe::Gpe1D solver(cfg);
            const auto ground = solver.ground_state();
            nlohmann::ordered_json gj;
            gj["trap_tune_factor"] = gs.trap_tune_factor;
            gj["design_frequency_hz"] = angular_to_hz(omega_design);
            gj["duration_s"] = gs.duration;
            gj["timestep_s"] = gs.timestep;
            gj["grid_points"] = cfg.grid.points;
            gj["chemical_potential_j"] = ground.chemical_potential;
            const double v_min =
                cfg.potential.value(solver.analysis().equilibrium_distance);
            const double hw = constants::hbar * solver.analysis().effective_frequency;
            gj["mu_over_hbar_omega"] = (ground.chemical_potential - v_min) / hw;
            gj["barrier_over_hbar_omega"] = solver.analysis().barrier_over_hbar_omega;
            gj["ground_state_iterations"] = ground.iterations;
            const double c =
                gpe::contrast(cfg, ground.psi, gs.drive.amplitude, gs.duration);
            gj["drive_amplitude_m"] = gs.drive.amplitude;
            gj["contrast"] = c;
            rep["gpe"] = gj;
            std::string snap = gpe::snapshot_csv_header() + "\n";
            const auto& z = solver.grid_z();
            for (size_t i = 0; i < z.size(); ++i)
                snap += gpe::snapshot_csv_row(z[i], ground.psi[i]) + "\n";
            out.tables["gpe_ground.csv"] = snap;
        }
    } else if (s.scheme == "cnt") {
        const auto params = scenario::build_cnt(s, species);
        const auto r = schemes::cnt_budget(params);
        rep["budget"] = r.budget.to_json();
        nlohmann::ordered_json cj;
        cj["variant"] = s.doc.at("parameters").value("variant", "cp");
        cj["effective_beta"] = r.effective_beta;
        cj["gN_per_epsilon_hz"] = angular_to_hz(r.gN_per_epsilon);
        rep["cnt"] = cj;
        if (r.analysis) rep["trap"] = trap_analysis_json(*r.analysis);
        out.tables["budget.csv"] = std::string(coupling::CouplingBudget::csv_header()) + "\n" +
                                   r.budget.csv_row() + "\n";
    } else if (s.scheme == "lattice") {
        const auto params = scenario::build_lattice(s, species);
        const auto r = schemes::lattice_budget(params);
        rep["budget"] = r.budget.to_json();
        nlohmann::ordered_json lj;
        lj["trap_frequency_hz"] = angular_to_hz(r.omega_a);
        lj["g_m_hz"] = angular_to_hz(r.g_m);
        lj["g_m_over_gN"] = r.budget.gN != 0.0 ? r.g_m / r.budget.gN : 0.0;
        if (params.atom_cooling_rate > 0.0) {
            const auto c = schemes::lattice_cooling(params);
            lj["gamma_m_hz"] = angular_to_hz(c.gamma_m);
            lj["cooling_rate_hz"] = angular_to_hz(c.cooling_rate);
            lj["n_ss"] = c.n_ss;
            lj["cooling_factor"] = c.cooling_factor;
            lj["atom_cooling_rate_note"] = "gamma_a_cool is a chosen input, not a derived value";
        }
        rep["lattice"] = lj;
        out.tables["budget.csv"] = std::string(coupling::CouplingBudget::csv_header()) + "\n" +
                                   r.budget.csv_row() + "\n";
    } else if (s.scheme == "magnetic") {
        const auto params = scenario::build_magnetic(s, species);
        const auto r = schemes::magnetic_budget(params);
        rep["budget"] = r.budget.to_json();
        nlohmann::ordered_json mj;
        mj["field_gradient_t_per_m"] = r.field_gradient;
        mj["larmor_frequency_hz"] = angular_to_hz(r.larmor_frequency);
        mj["resonance_b0_t"] = r.resonance_b0;
        mj["transfer_time_s"] = r.transfer_time;
        mj["static_gradient_residual_t_per_m"] = r.static_gradient_residual;
        mj["magnet_moment_jt"] = params.magnet_moment;
        mj["cantilever_mass_kg"] = params.cantilever.effective_mass;
        mj["mass_from_geometry"] = params.cantilever.mass_from_geometry;
        rep["magnetic"] = mj;
        out.tables["budget.csv"] = std::string(coupling::CouplingBudget::csv_header()) + "\n" +
                                   r.budget.csv_row() + "\n";
    }
    return out;
}

} // namespace hybridsim::report

#endif
