#ifndef HYBRIDSIM_TYPES_HPP
#define HYBRIDSIM_TYPES_HPP

#include <map>
#include <optional>
#include <string>

#include "hybridsim/constants.hpp"
#include "hybridsim/errors.hpp"

namespace hybridsim {

// One atomic species. Mass and static polarizability in SI; hyperfine
// g-factors keyed by the F quantum number as a string ("1", "2", ...).
struct AtomSpecies {
    std::string name;
    double mass = 0.0;                  // kg
    double static_polarizability = 0.0; // C m^2 / V
    double charge = 0.0;                // C (nonzero for ions)
    std::map<std::string, double> hyperfine_g_factors;
    std::optional<double> hyperfine_splitting; // rad/s

    void validate() const {
        if (!(mass > 0.0)) throw PhysicsError("AtomSpecies '" + name + "': mass must be > 0");
        if (static_polarizability < 0.0)
            throw PhysicsError("AtomSpecies '" + name + "': polarizability must be >= 0");
    }
};

// Mode-shape factors for converting beam geometry to effective mass
// (fraction of the physical mass moving in the fundamental mode).
inline constexpr double kModeShapeCantilever = 0.243;
inline constexpr double kModeShapeDoublyClamped = 0.397;

struct OscillatorGeometry {
    double length = 0.0;    // m
    double width = 0.0;     // m
    double thickness = 0.0; // m
    double density = 0.0;   // kg/m^3
    double mode_shape_factor = kModeShapeCantilever;

    double effective_mass() const {
        return mode_shape_factor * density * length * width * thickness;
    }
};

// A single mechanical mode.
struct OscillatorSpec {
    std::string name;
    double effective_mass = 0.0;    // kg
    double frequency = 0.0;         // rad/s
    double quality_factor = 0.0;
    double power_reflectivity = 0.0; // R in [0,1]
    std::optional<OscillatorGeometry> geometry;
    // Geometry-derived masses are approximate: the mode-shape convention is
    // ours, not the literature value for a specific device.
    bool mass_from_geometry = false;

    static OscillatorSpec from_geometry(std::string name, const OscillatorGeometry& geom,
                                        double frequency, double quality_factor,
                                        double reflectivity = 0.0) {
        OscillatorSpec s;
        s.name = std::move(name);
        s.geometry = geom;
        s.effective_mass = geom.effective_mass();
        s.mass_from_geometry = true;
        s.frequency = frequency;
        s.quality_factor = quality_factor;
        s.power_reflectivity = reflectivity;
        s.validate();
        return s;
    }

    void validate() const {
        if (!(effective_mass > 0.0)) throw PhysicsError("OscillatorSpec: effective_mass must be > 0");
        if (!(frequency > 0.0)) throw PhysicsError("OscillatorSpec: frequency must be > 0");
        if (!(quality_factor > 0.0)) throw PhysicsError("OscillatorSpec: quality_factor must be > 0");
        if (power_reflectivity < 0.0 || power_reflectivity > 1.0)
            throw PhysicsError("OscillatorSpec: power_reflectivity must lie in [0,1]");
        if (geometry) {
            const double mg = geometry->effective_mass();
            if (mass_from_geometry && std::abs(mg - effective_mass) > 1e-9 * std::abs(mg))
                throw PhysicsError("OscillatorSpec: effective_mass inconsistent with geometry");
        }
    }
};

struct Environment {
    double bath_temperature = 0.0; // K

    void validate() const {
        if (bath_temperature < 0.0) throw PhysicsError("Environment: bath_temperature must be >= 0");
    }
};

enum class TrapKind { magnetic, optical_lattice, ion_rf, optical_dipole };

inline const char* to_string(TrapKind k) {
    switch (k) {
        case TrapKind::magnetic: return "magnetic";
        case TrapKind::optical_lattice: return "optical_lattice";
        case TrapKind::ion_rf: return "ion_rf";
        case TrapKind::optical_dipole: return "optical_dipole";
    }
    return "?";
}

// The bare (undeformed) 1D atom trap along the coupling axis.
struct TrapSpec {
    double bare_frequency = 0.0; // rad/s
    double bare_minimum = 0.0;   // m
    TrapKind trap_kind = TrapKind::magnetic;

    void validate() const {
        // Traps entirely generated by the coupling potential (optical lattice,
        // fully curvature-dominated ion trap) may carry zero bare curvature.
        if (trap_kind == TrapKind::optical_lattice || trap_kind == TrapKind::ion_rf) {
            if (bare_frequency < 0.0) throw PhysicsError("TrapSpec: bare_frequency must be >= 0");
        } else if (!(bare_frequency > 0.0)) {
            throw PhysicsError("TrapSpec: bare_frequency must be > 0");
        }
    }
};

} // namespace hybridsim

#endif
