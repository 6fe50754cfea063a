#ifndef HYBRIDSIM_POTENTIALS_HPP
#define HYBRIDSIM_POTENTIALS_HPP

#include <cmath>
#include <string>

#include "hybridsim/constants.hpp"
#include "hybridsim/errors.hpp"

#include <json.hpp>

// 1D pair potentials U_c[d] with exact analytic derivatives through 4th
// order. Every kind shipped here is a power law A * d^-p; the kinds differ
// only in how A is built from physical inputs.
namespace hybridsim::potentials {

enum class PotentialKind {
    coulomb,
    casimir_polder,
    scaled_casimir_polder,
    charged_tip_polarization,
    magnetic_dipole_pair,
    custom_power_law,
};

inline const char* to_string(PotentialKind k) {
    switch (k) {
        case PotentialKind::coulomb: return "coulomb";
        case PotentialKind::casimir_polder: return "casimir_polder";
        case PotentialKind::scaled_casimir_polder: return "scaled_casimir_polder";
        case PotentialKind::charged_tip_polarization: return "charged_tip_polarization";
        case PotentialKind::magnetic_dipole_pair: return "magnetic_dipole_pair";
        case PotentialKind::custom_power_law: return "custom_power_law";
    }
    return "?";
}

inline PotentialKind potential_kind_from_string(const std::string& s) {
    if (s == "coulomb") return PotentialKind::coulomb;
    if (s == "casimir_polder") return PotentialKind::casimir_polder;
    if (s == "scaled_casimir_polder") return PotentialKind::scaled_casimir_polder;
    if (s == "charged_tip_polarization") return PotentialKind::charged_tip_polarization;
    if (s == "magnetic_dipole_pair") return PotentialKind::magnetic_dipole_pair;
    if (s == "custom_power_law") return PotentialKind::custom_power_law;
    throw SchemaError("unknown potential kind '" + s + "'");
}

inline constexpr double kDefaultValidMin = 10e-9;   // m
inline constexpr double kDefaultValidMax = 100e-6;  // m

class CouplingPotential {
public:
    // U_c[d] = coefficient * d^-power. Evaluation outside [d_min, d_max] is
    // an error, never an extrapolation.
    CouplingPotential(PotentialKind kind, double coefficient, double power,
                      double d_min = kDefaultValidMin, double d_max = kDefaultValidMax)
        : kind_(kind), coeff_(coefficient), power_(power), d_min_(d_min), d_max_(d_max) {}

    // Coulomb interaction between the ion charge and the tip charge,
    // U_c[d] = (1/4 pi eps0) q_ion q_tip / d.
    static CouplingPotential coulomb(double charge_ion, double charge_tip) {
        const double a = charge_ion * charge_tip / (4.0 * constants::pi * constants::epsilon_0);
        return CouplingPotential(PotentialKind::coulomb, a, 1.0);
    }

    // Attractive surface potential -C4/d^4 (retains the 1/d^4 form at all
    // valid distances).
    static CouplingPotential casimir_polder(double c4) {
        if (!(c4 > 0.0)) throw PhysicsError("casimir_polder: C4 must be > 0");
        return CouplingPotential(PotentialKind::casimir_polder, -c4, 4.0);
    }

    // -beta C4/d^4: adsorbate-enhanced (beta > 1) or reduced-geometry
    // (beta < 1, e.g. nanotube) surface potentials.
    static CouplingPotential scaled_casimir_polder(double c4, double beta) {
        if (!(c4 > 0.0)) throw PhysicsError("scaled_casimir_polder: C4 must be > 0");
        if (!(beta > 0.0)) throw PhysicsError("scaled_casimir_polder: beta must be > 0");
        return CouplingPotential(PotentialKind::scaled_casimir_polder, -beta * c4, 4.0);
    }

    // Induced-dipole attraction of a neutral atom to a charged tip:
    // U_c[d] = -(alpha0/2) (q / 4 pi eps0 d^2)^2, same 1/d^4 law as the
    // surface potential with C4_eff = (alpha0/2)(q/4 pi eps0)^2.
    static CouplingPotential charged_tip_polarization(double alpha0, double charge) {
        const double c4_eff = charged_tip_effective_c4(alpha0, charge);
        return CouplingPotential(PotentialKind::charged_tip_polarization, -c4_eff, 4.0);
    }

    static double charged_tip_effective_c4(double alpha0, double charge) {
        if (alpha0 < 0.0) throw PhysicsError("charged_tip_polarization: alpha0 must be >= 0");
        const double field_factor = charge / (4.0 * constants::pi * constants::epsilon_0);
        return 0.5 * alpha0 * field_factor * field_factor;
    }

    // Two coaxial magnetic dipoles aligned head to tail:
    // U_c[d] = -mu0 mu1 mu2 / (2 pi d^3).
    static CouplingPotential magnetic_dipole_pair(double mu1, double mu2) {
        const double a = -constants::mu_0 * mu1 * mu2 / (2.0 * constants::pi);
        return CouplingPotential(PotentialKind::magnetic_dipole_pair, a, 3.0);
    }

    // U_c[d] = coefficient / d^power. Covers measured surface potentials
    // that follow a power law with fitted strength.
    static CouplingPotential custom_power_law(double coefficient, double power) {
        if (power < 0.0) throw PhysicsError("custom_power_law: power must be >= 0");
        return CouplingPotential(PotentialKind::custom_power_law, coefficient, power);
    }

    PotentialKind kind() const { return kind_; }
    double coefficient() const { return coeff_; }
    double power() const { return power_; }
    double valid_min() const { return d_min_; }
    double valid_max() const { return d_max_; }

    CouplingPotential with_valid_range(double d_min, double d_max) const {
        CouplingPotential p = *this;
        p.d_min_ = d_min;
        p.d_max_ = d_max;
        return p;
    }

    bool in_range(double d) const { return d >= d_min_ && d <= d_max_; }

    // n-th derivative of U_c at separation d, n in 0..4. Units J/m^n.
    double derivative(int order, double d) const {
        if (order < 0 || order > 4)
            throw PhysicsError("CouplingPotential: derivative order must be 0..4");
        if (!(d > 0.0)) throw PhysicsError("CouplingPotential: d must be > 0");
        if (!in_range(d))
            throw PhysicsError("CouplingPotential: d outside valid range");
        return derivative_unchecked(order, d);
    }

    // Same formula without the range guard; trapscape uses it to probe the
    // region between the surface and the valid window when locating saddles.
    double derivative_unchecked(int order, double d) const {
        double fac = 1.0;
        for (int j = 0; j < order; ++j) fac *= -(power_ + j);
        return coeff_ * fac * std::pow(d, -power_ - order);
    }

    double value(double d) const { return derivative(0, d); }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["kind"] = to_string(kind_);
        j["coefficient_si"] = coeff_;
        j["power"] = power_;
        j["valid_min_m"] = d_min_;
        j["valid_max_m"] = d_max_;
        return j;
    }

    static CouplingPotential from_json(const nlohmann::json& j) {
        const auto kind = potential_kind_from_string(j.at("kind").get<std::string>());
        CouplingPotential p(kind, j.at("coefficient_si").get<double>(), j.at("power").get<double>());
        if (j.contains("valid_min_m")) p.d_min_ = j.at("valid_min_m").get<double>();
        if (j.contains("valid_max_m")) p.d_max_ = j.at("valid_max_m").get<double>();
        return p;
    }

private:
    PotentialKind kind_;
    double coeff_;
    double power_;
    double d_min_;
    double d_max_;
};

// Field gradient of a point dipole mu_m at distance d along its axis:
// G_m = 3 mu0 mu_m / (4 pi d^4). Used by the magnetic coupling scheme.
inline double magnetic_dipole_gradient(double mu_m, double d) {
    if (!(d > 0.0)) throw PhysicsError("magnetic_dipole_gradient: d must be > 0");
    if (mu_m < 0.0) throw PhysicsError("magnetic_dipole_gradient: mu_m must be >= 0");
    return 3.0 * constants::mu_0 * mu_m / (4.0 * constants::pi * d * d * d * d);
}

} // namespace hybridsim::potentials

#endif
