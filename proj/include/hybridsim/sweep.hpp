#ifndef HYBRIDSIM_SWEEP_HPP
#define HYBRIDSIM_SWEEP_HPP

#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hybridsim/errors.hpp"
#include "hybridsim/report.hpp"
#include "hybridsim/scenario.hpp"

// Parameter sweeps over scenario axes. Single-axis surface sweeps delegate
// to the trapscape tables; anything else re-runs the scheme budget per grid
// point. Points may fail individually (flagged, not fatal); row order is the
// grid order regardless of execution order.
namespace hybridsim::sweep {

struct Axis {
    std::string name;  // key under parameters/, or a dotted path (gpe.drive.amplitude_m)
    double from = 0.0;
    double to = 0.0;
    int points = 0;
    bool log_scale = false;
    std::string mode; // distance sweeps: "retuned" (default) or "fixed_bare"
};

inline std::vector<double> make_grid(const Axis& a) {
    if (a.points < 1) throw SchemaError("sweep axis '" + a.name + "': points must be >= 1");
    std::vector<double> g;
    g.reserve(a.points);
    if (a.points == 1) {
        g.push_back(a.from);
        return g;
    }
    if (a.log_scale) {
        if (!(a.from > 0.0) || !(a.to > 0.0))
            throw SchemaError("sweep axis '" + a.name + "': log scale needs positive bounds");
        const double r = std::log(a.to / a.from) / (a.points - 1);
        for (int i = 0; i < a.points; ++i) g.push_back(a.from * std::exp(r * i));
    } else {
        const double step = (a.to - a.from) / (a.points - 1);
        for (int i = 0; i < a.points; ++i) g.push_back(a.from + step * i);
    }
    return g;
}

inline std::vector<Axis> axes_from_scenario(const scenario::Scenario& s) {
    std::vector<Axis> axes;
    if (!s.doc.contains("sweep")) return axes;
    const auto& arr = s.doc.at("sweep");
    if (!arr.is_array()) throw SchemaError("sweep: expected an array of axis blocks");
    for (const auto& j : arr) {
        scenario::detail::check_keys(j, {"axis", "from", "to", "points", "scale", "mode"},
                                     "sweep axis");
        Axis a;
        a.name = j.at("axis").get<std::string>();
        a.from = scenario::detail::require_number(j, "from", "sweep");
        a.to = scenario::detail::require_number(j, "to", "sweep");
        a.points = static_cast<int>(scenario::detail::require_number(j, "points", "sweep"));
        a.log_scale = j.value("scale", "linear") == "log";
        a.mode = j.value("mode", "");
        axes.push_back(a);
    }
    return axes;
}

struct SweepOutput {
    std::string csv;
    size_t rows = 0;
};

namespace detail {

inline nlohmann::json patched(const nlohmann::json& doc, const std::string& axis, double v) {
    nlohmann::json out = doc;
    std::string path = axis.find('.') == std::string::npos ? "parameters." + axis : axis;
    for (auto& c : path)
        if (c == '.') c = '/';
    out[nlohmann::json::json_pointer("/" + path)] = v;
    return out;
}

inline std::string budget_sweep_header(const std::vector<Axis>& axes) {
    std::string h;
    for (const auto& a : axes) h += a.name + ",";
    h += coupling::CouplingBudget::csv_header();
    h += ",error";
    return h;
}

} // namespace detail

inline SweepOutput run_sweep(const scenario::Scenario& s,
                             const std::map<std::string, AtomSpecies>& species_table,
                             const std::vector<Axis>& axes, int jobs = 1) {
    if (axes.empty()) throw SchemaError("sweep: no axes given");
    SweepOutput out;

    // Dedicated single-axis surface sweeps.
    if (axes.size() == 1 && s.scheme == "bec_surface" &&
        (axes[0].name == "distance_m" || axes[0].name == "barrier_hbar_omega")) {
        const auto params = scenario::build_bec_surface(s, scenario::resolve_species(s, species_table));
        const auto surface =
            potentials::CouplingPotential::scaled_casimir_polder(params.c4, params.beta);
        trapscape::SweepConfig cfg(params.atom, surface, params.omega_target);
        cfg.gravity_on = params.gravity_on;
        if (axes[0].mode == "fixed_bare") cfg.mode = trapscape::SweepMode::fixed_bare;
        const auto grid = make_grid(axes[0]);
        const auto rows = (axes[0].name == "distance_m")
                              ? trapscape::epsilon_vs_distance(cfg, grid)
                              : trapscape::epsilon_vs_barrier(cfg, grid);
        out.csv = io::csv_preamble(s.hash);
        out.csv += "# epsilon_convention=";
        out.csv += (cfg.mode == trapscape::SweepMode::fixed_bare ? "nominal_estimate"
                                                                 : "eq7_at_minimum");
        out.csv += "\n# gravity_on=";
        out.csv += cfg.gravity_on ? "1" : "0";
        out.csv += "\n";
        out.csv += trapscape::sweep_csv_header();
        out.csv += "\n";
        for (const auto& r : rows) out.csv += trapscape::sweep_csv_row(r) + "\n";
        out.rows = rows.size();
        return out;
    }

    // GPE contrast curve along the drive amplitude.
    if (axes.size() == 1 && axes[0].name == "gpe.drive.amplitude_m") {
        if (s.scheme != "bec_surface" || !s.doc.contains("gpe"))
            throw SchemaError("sweep: gpe.drive.amplitude_m needs a bec_surface scenario with a gpe block");
        const auto params = scenario::build_bec_surface(s, scenario::resolve_species(s, species_table));
        const auto gs = scenario::build_gpe_settings(s);
        auto cfg = scenario::make_gpe_config(params, gs,
                                             params.omega_target * gs.trap_tune_factor);
        const auto rows = gpe::contrast_curve(cfg, make_grid(axes[0]), gs.duration);
        out.csv = io::csv_preamble(s.hash) + "amplitude_m,contrast\n";
        for (const auto& r : rows) {
            out.csv += io::format_double(r.amplitude) + "," + io::format_double(r.contrast) + "\n";
        }
        out.rows = rows.size();
        return out;
    }

    // Generic budget sweep over one or two axes (outer product).
    if (axes.size() > 2) throw SchemaError("sweep: at most two axes supported");
    std::vector<std::vector<double>> grids;
    for (const auto& a : axes) grids.push_back(make_grid(a));
    std::vector<std::vector<double>> points; // row-major outer product
    if (axes.size() == 1) {
        for (double v : grids[0]) points.push_back({v});
    } else {
        for (double v0 : grids[0])
            for (double v1 : grids[1]) points.push_back({v0, v1});
    }

    std::vector<std::string> rows(points.size());
    auto work = [&](size_t begin, size_t step) {
        for (size_t i = begin; i < points.size(); i += step) {
            scenario::Scenario patched = s;
            patched.doc = detail::patched(s.doc, axes[0].name, points[i][0]);
            if (axes.size() == 2)
                patched.doc = detail::patched(patched.doc, axes[1].name, points[i][1]);
            patched.doc.erase("gpe"); // budget rows only; no per-point GPE runs
            std::string prefix;
            for (double v : points[i]) prefix += io::format_double(v) + ",";
            try {
                const auto res = report::run_scenario(patched, species_table);
                coupling::CouplingBudget b;
                const auto& bj = res.report.at("budget");
                char buf[512];
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,0",
                              bj.at("epsilon").get<double>(), bj.at("g0_hz").get<double>(),
                              bj.at("gN_hz").get<double>(),
                              bj.at("gamma_m_dec_hz").get<double>(),
                              bj.at("gamma_a_dec_hz").get<double>(), bj.at("n_th").get<double>(),
                              bj.at("strong_coupling").get<bool>() ? 1 : 0);
                rows[i] = prefix + buf;
                (void)b;
            } catch (const std::exception&) {
                rows[i] = prefix + "nan,nan,nan,nan,nan,nan,0,1";
            }
        }
    };
    const int n_jobs = jobs < 1 ? 1 : jobs;
    if (n_jobs == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < n_jobs; ++t) threads.emplace_back(work, t, n_jobs);
        for (auto& t : threads) t.join();
    }

    out.csv = io::csv_preamble(s.hash) + detail::budget_sweep_header(axes) + "\n";
    for (const auto& r : rows) out.csv += r + "\n";
    out.rows = rows.size();
    return out;
}

} // namespace hybridsim::sweep

#endif
