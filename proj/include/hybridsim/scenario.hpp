#ifndef HYBRIDSIM_SCENARIO_HPP
#define HYBRIDSIM_SCENARIO_HPP

#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridsim/constants.hpp"
#include "hybridsim/errors.hpp"
#include "hybridsim/gpe.hpp"
#include "hybridsim/io.hpp"
#include "hybridsim/schemes.hpp"
#include "hybridsim/types.hpp"

// Scenario files: one JSON document per run, schema-validated with unknown
// keys rejected. Keys are SI-unit-suffixed; keys starting with '_' are
// documentation and ignored.
namespace hybridsim::scenario {

namespace fs = std::filesystem;
using json = nlohmann::json;

inline fs::path default_preset_dir() {
    if (const char* env = std::getenv("HYBRIDSIM_PRESET_DIR")) return fs::path(env);
    return fs::path(HYBRIDSIM_SOURCE_DIR) / "presets";
}

inline fs::path species_table_path(const fs::path& preset_dir) {
    const fs::path local = preset_dir / "species.json";
    if (fs::exists(local)) return local;
    return fs::path(HYBRIDSIM_SOURCE_DIR) / "data" / "species.json";
}

struct Scenario {
    json doc;
    std::string raw;
    std::string hash;
    std::string name;
    std::string scheme;
    fs::path path;
};

namespace detail {

inline void check_keys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& where) {
    if (!obj.is_object()) throw SchemaError(where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (!key.empty() && key[0] == '_') continue; // documentation keys
        if (!allowed.count(key))
            throw SchemaError(where + ": unknown key '" + key + "'");
    }
}

inline double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw SchemaError(where + ": missing key '" + key + "'");
    if (!obj.at(key).is_number()) throw SchemaError(where + ": '" + key + "' must be a number");
    return obj.at(key).get<double>();
}

inline double number_or(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) throw SchemaError("'" + key + "' must be a number");
    return obj.at(key).get<double>();
}

inline OscillatorSpec parse_oscillator(const json& j, const std::string& where) {
    check_keys(j, {"name", "effective_mass_kg", "frequency_hz", "quality_factor",
                   "power_reflectivity", "geometry"},
               where);
    OscillatorSpec osc;
    osc.name = j.value("name", "oscillator");
    osc.frequency = hz_to_angular(require_number(j, "frequency_hz", where));
    osc.quality_factor = require_number(j, "quality_factor", where);
    osc.power_reflectivity = number_or(j, "power_reflectivity", 0.0);
    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        check_keys(g, {"length_m", "width_m", "thickness_m", "density_kg_m3",
                       "mode_shape_factor"},
                   where + ".geometry");
        OscillatorGeometry geom;
        geom.length = require_number(g, "length_m", where);
        geom.width = require_number(g, "width_m", where);
        geom.thickness = require_number(g, "thickness_m", where);
        geom.density = require_number(g, "density_kg_m3", where);
        geom.mode_shape_factor = number_or(g, "mode_shape_factor", kModeShapeCantilever);
        osc.geometry = geom;
        if (j.contains("effective_mass_kg")) {
            osc.effective_mass = require_number(j, "effective_mass_kg", where);
        } else {
            osc.effective_mass = geom.effective_mass();
            osc.mass_from_geometry = true;
        }
    } else {
        osc.effective_mass = require_number(j, "effective_mass_kg", where);
    }
    osc.validate();
    return osc;
}

} // namespace detail

inline Scenario load_scenario(const fs::path& path) {
    Scenario s;
    s.path = path;
    s.raw = io::read_file(path);
    s.hash = io::fnv1a_hex(s.raw);
    try {
        s.doc = json::parse(s.raw, nullptr, true, true);
    } catch (const json::exception& e) {
        throw SchemaError("scenario parse error in " + path.string() + ": " + e.what());
    }
    detail::check_keys(s.doc,
                       {"schema_version", "name", "scheme", "species", "parameters",
                        "environment", "gpe", "sweep", "output"},
                       "scenario");
    if (!s.doc.contains("scheme")) throw SchemaError("scenario: missing 'scheme'");
    s.scheme = s.doc.at("scheme").get<std::string>();
    s.name = s.doc.value("name", path.stem().string());
    const std::set<std::string> known = {"ion",      "bec_surface", "cnt",
                                         "lattice",  "magnetic",    "cavity_reference"};
    if (!known.count(s.scheme)) throw SchemaError("scenario: unknown scheme '" + s.scheme + "'");
    if (s.doc.contains("environment"))
        detail::check_keys(s.doc.at("environment"), {"bath_temperature_k"}, "environment");
    return s;
}

inline AtomSpecies resolve_species(const Scenario& s,
                                   const std::map<std::string, AtomSpecies>& table) {
    if (!s.doc.contains("species")) throw SchemaError("scenario: missing 'species'");
    const std::string name = s.doc.at("species").get<std::string>();
    const auto it = table.find(name);
    if (it == table.end()) throw SchemaError("scenario: species '" + name + "' not in table");
    return it->second;
}

inline Environment parse_environment(const Scenario& s) {
    Environment env;
    if (s.doc.contains("environment"))
        env.bath_temperature = detail::require_number(s.doc.at("environment"),
                                                      "bath_temperature_k", "environment");
    env.validate();
    return env;
}

// --- scheme parameter builders ---------------------------------------------

inline schemes::IonSchemeParams build_ion(const Scenario& s, const AtomSpecies& species) {
    const auto& p = s.doc.at("parameters");
    detail::check_keys(p,
                       {"trap_frequency_hz", "distance_m", "sphere_radius_m", "voltage_v",
                        "tip_charge_c", "target_epsilon", "compensation_factor",
                        "atomic_decoherence_hz", "oscillator"},
                       "ion parameters");
    schemes::IonSchemeParams out;
    out.ion = species;
    out.trap_frequency = hz_to_angular(detail::require_number(p, "trap_frequency_hz", "ion"));
    out.distance = detail::require_number(p, "distance_m", "ion");
    if (p.contains("sphere_radius_m")) out.sphere_radius = p.at("sphere_radius_m").get<double>();
    if (p.contains("voltage_v")) out.voltage = p.at("voltage_v").get<double>();
    if (p.contains("tip_charge_c")) out.tip_charge = p.at("tip_charge_c").get<double>();
    if (p.contains("target_epsilon")) out.target_epsilon = p.at("target_epsilon").get<double>();
    out.compensation_factor = detail::number_or(p, "compensation_factor", 1.0);
    out.atomic_decoherence = hz_to_angular(detail::number_or(p, "atomic_decoherence_hz", 0.0));
    out.oscillator = detail::parse_oscillator(p.at("oscillator"), "ion.oscillator");
    out.environment = parse_environment(s);
    return out;
}

inline schemes::BecSurfaceParams build_bec_surface(const Scenario& s,
                                                   const AtomSpecies& species) {
    const auto& p = s.doc.at("parameters");
    detail::check_keys(p,
                       {"n_atoms", "trap_frequency_hz", "c4_jm4", "beta", "barrier_hbar_omega",
                        "distance_m", "atomic_decoherence_hz", "gravity_on", "retune_trap",
                        "oscillator"},
                       "bec_surface parameters");
    schemes::BecSurfaceParams out;
    out.atom = species;
    out.n_atoms = static_cast<long>(detail::number_or(p, "n_atoms", 1));
    out.omega_target = hz_to_angular(detail::require_number(p, "trap_frequency_hz", "bec"));
    out.c4 = detail::require_number(p, "c4_jm4", "bec");
    out.beta = detail::number_or(p, "beta", 1.0);
    if (p.contains("distance_m")) out.distance = p.at("distance_m").get<double>();
    if (p.contains("barrier_hbar_omega"))
        out.barrier_hbar_omega = p.at("barrier_hbar_omega").get<double>();
    out.atomic_decoherence = hz_to_angular(detail::number_or(p, "atomic_decoherence_hz", 0.0));
    out.gravity_on = p.value("gravity_on", false);
    out.retune = p.value("retune_trap", true);
    out.oscillator = detail::parse_oscillator(p.at("oscillator"), "bec.oscillator");
    out.environment = parse_environment(s);
    return out;
}

inline schemes::CntSchemeParams build_cnt(const Scenario& s, const AtomSpecies& species) {
    const auto& p = s.doc.at("parameters");
    detail::check_keys(p,
                       {"variant", "n_atoms", "trap_frequency_hz", "c4_jm4", "cp_scale",
                        "tube_charge_c", "barrier_hbar_omega", "atomic_decoherence_hz",
                        "oscillator"},
                       "cnt parameters");
    schemes::CntSchemeParams out;
    out.variant = schemes::cnt_variant_from_string(p.value("variant", "cp"));
    out.atom = species;
    out.n_atoms = static_cast<long>(detail::number_or(p, "n_atoms", 1));
    out.omega_target = hz_to_angular(detail::require_number(p, "trap_frequency_hz", "cnt"));
    out.c4 = detail::number_or(p, "c4_jm4", 0.0);
    out.cp_scale = detail::number_or(p, "cp_scale", 0.06);
    if (p.contains("tube_charge_c")) out.tube_charge = p.at("tube_charge_c").get<double>();
    out.barrier_hbar_omega = detail::number_or(p, "barrier_hbar_omega", 8.0);
    out.atomic_decoherence = hz_to_angular(detail::number_or(p, "atomic_decoherence_hz", 0.0));
    out.nanotube = detail::parse_oscillator(p.at("oscillator"), "cnt.oscillator");
    out.environment = parse_environment(s);
    return out;
}

inline schemes::LatticeSchemeParams build_lattice(const Scenario& s,
                                                  const AtomSpecies& species) {
    const auto& p = s.doc.at("parameters");
    detail::check_keys(p,
                       {"wavelength_m", "wavevector_per_m", "lattice_depth_j", "n_atoms",
                        "atom_cooling_rate_hz", "atomic_decoherence_hz", "oscillator"},
                       "lattice parameters");
    schemes::LatticeSchemeParams out;
    out.atom = species;
    if (p.contains("wavevector_per_m")) {
        out.wavevector = p.at("wavevector_per_m").get<double>();
    } else {
        out.wavevector = constants::two_pi / detail::require_number(p, "wavelength_m", "lattice");
    }
    out.lattice_depth = detail::require_number(p, "lattice_depth_j", "lattice");
    out.n_atoms = static_cast<long>(detail::number_or(p, "n_atoms", 1));
    out.atom_cooling_rate = hz_to_angular(detail::number_or(p, "atom_cooling_rate_hz", 0.0));
    out.atomic_decoherence = hz_to_angular(detail::number_or(p, "atomic_decoherence_hz", 0.0));
    out.membrane = detail::parse_oscillator(p.at("oscillator"), "lattice.oscillator");
    out.environment = parse_environment(s);
    return out;
}

inline schemes::MagneticSchemeParams build_magnetic(const Scenario& s,
                                                    const AtomSpecies& species) {
    const auto& p = s.doc.at("parameters");
    detail::check_keys(p,
                       {"n_atoms", "distance_m", "magnet", "magnet_moment_jt", "state_pair",
                        "two_photon", "bias_field_t", "compensation_residual",
                        "atomic_decoherence_hz", "oscillator"},
                       "magnetic parameters");
    schemes::MagneticSchemeParams out;
    out.atom = species;
    out.n_atoms = static_cast<long>(detail::number_or(p, "n_atoms", 1));
    out.distance = detail::require_number(p, "distance_m", "magnetic");
    if (p.contains("magnet_moment_jt")) {
        out.magnet_moment = p.at("magnet_moment_jt").get<double>();
    } else if (p.contains("magnet")) {
        const auto& mg = p.at("magnet");
        detail::check_keys(mg, {"magnetization_a_per_m", "length_m", "width_m", "thickness_m"},
                           "magnetic.magnet");
        out.magnet_moment = detail::require_number(mg, "magnetization_a_per_m", "magnet") *
                            detail::require_number(mg, "length_m", "magnet") *
                            detail::require_number(mg, "width_m", "magnet") *
                            detail::require_number(mg, "thickness_m", "magnet");
    } else {
        throw SchemaError("magnetic parameters: provide magnet or magnet_moment_jt");
    }
    out.state_pair = schemes::state_pair_from_string(p.value("state_pair", "F1m-1_F10"));
    out.two_photon = p.value("two_photon", false);
    out.bias_field = detail::require_number(p, "bias_field_t", "magnetic");
    out.compensation_residual = detail::number_or(p, "compensation_residual", 0.0);
    out.atomic_decoherence = hz_to_angular(detail::number_or(p, "atomic_decoherence_hz", 0.0));
    out.cantilever = detail::parse_oscillator(p.at("oscillator"), "magnetic.oscillator");
    out.environment = parse_environment(s);
    return out;
}

inline schemes::CavitySchemeRecord build_cavity(const Scenario& s) {
    const auto& p = s.doc.at("parameters");
    detail::check_keys(p,
                       {"reported_g0_hz", "reported_frequency_hz", "reported_quality_factor",
                        "finesse", "note"},
                       "cavity parameters");
    schemes::CavitySchemeRecord rec;
    rec.reported_g0 = hz_to_angular(detail::require_number(p, "reported_g0_hz", "cavity"));
    rec.reported_omega_m =
        hz_to_angular(detail::require_number(p, "reported_frequency_hz", "cavity"));
    rec.reported_q = detail::require_number(p, "reported_quality_factor", "cavity");
    rec.finesse = detail::number_or(p, "finesse", 0.0);
    rec.note = p.value("note", "");
    return rec;
}

// --- GPE block ---------------------------------------------------------------

struct GpeSettings {
    double interaction_1d = 0.0; // J m
    gpe::GpeGrid grid;
    double timestep = 1e-7;
    double duration = 0.02;
    gpe::GpeDrive drive;
    gpe::GpeAbsorber absorber;
    double trap_tune_factor = 1.0;
};

inline GpeSettings build_gpe_settings(const Scenario& s) {
    const auto& g = s.doc.at("gpe");
    detail::check_keys(g,
                       {"interaction_1d_jm", "grid", "timestep_s", "duration_s", "drive",
                        "absorber", "trap_tune_factor"},
                       "gpe");
    GpeSettings out;
    out.interaction_1d = detail::number_or(g, "interaction_1d_jm", 0.0);
    const auto& gr = g.at("grid");
    detail::check_keys(gr, {"z_min_m", "z_max_m", "points"}, "gpe.grid");
    out.grid.z_min = detail::require_number(gr, "z_min_m", "gpe.grid");
    out.grid.z_max = detail::require_number(gr, "z_max_m", "gpe.grid");
    out.grid.points = static_cast<int>(detail::require_number(gr, "points", "gpe.grid"));
    out.timestep = detail::number_or(g, "timestep_s", 1e-7);
    out.duration = detail::number_or(g, "duration_s", 0.02);
    if (g.contains("drive")) {
        const auto& d = g.at("drive");
        detail::check_keys(d, {"amplitude_m", "frequency_hz", "phase_rad"}, "gpe.drive");
        out.drive.amplitude = detail::number_or(d, "amplitude_m", 0.0);
        out.drive.omega = hz_to_angular(detail::number_or(d, "frequency_hz", 0.0));
        out.drive.phase = detail::number_or(d, "phase_rad", 0.0);
    }
    if (g.contains("absorber")) {
        const auto& a = g.at("absorber");
        detail::check_keys(a, {"offset_from_saddle_m", "strength_j"}, "gpe.absorber");
        out.absorber.offset_from_saddle = detail::number_or(a, "offset_from_saddle_m", 50e-9);
        out.absorber.strength = detail::number_or(a, "strength_j", 0.0);
    }
    out.trap_tune_factor = detail::number_or(g, "trap_tune_factor", 1.0);
    return out;
}

// GPE configuration for the scenario's surface trap, optionally re-targeted
// to a different design frequency (spectroscopy re-solve).
inline gpe::GpeConfig make_gpe_config(const schemes::BecSurfaceParams& bp,
                                      const GpeSettings& gs, double omega_design) {
    const auto surface = potentials::CouplingPotential::scaled_casimir_polder(bp.c4, bp.beta);
    trapscape::SweepConfig cfg(bp.atom, surface, omega_design);
    cfg.gravity_on = bp.gravity_on;
    const double d = trapscape::distance_for_barrier(
        cfg, bp.barrier_hbar_omega.value_or(8.0) * constants::hbar * omega_design);
    gpe::GpeConfig out;
    out.grid = gs.grid;
    out.atom = bp.atom;
    out.n_atoms = static_cast<double>(bp.n_atoms);
    out.interaction_1d = gs.interaction_1d;
    out.potential = trapscape::retuned_trap(bp.atom, surface, 0.0, d, omega_design,
                                            bp.gravity_on);
    out.drive = gs.drive;
    out.absorber = gs.absorber;
    out.timestep = gs.timestep;
    return out;
}

} // namespace hybridsim::scenario

#endif
