// hybridsim command-line front end: scenario execution, parameter sweeps,
// the reference regression suite, and preset listing.
//
// Exit codes: 0 success, 1 failed checks, 2 schema/validation error,
// 3 physics-domain error, 4 solver non-convergence.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hybridsim/errors.hpp"
#include "hybridsim/io.hpp"
#include "hybridsim/papercheck.hpp"
#include "hybridsim/report.hpp"
#include "hybridsim/scenario.hpp"
#include "hybridsim/sweep.hpp"
#include "hybridsim/version.hpp"

namespace fs = std::filesystem;
using namespace hybridsim;

namespace {

fs::path resolve_scenario_path(const std::string& arg, const fs::path& preset_dir) {
    fs::path p(arg);
    if (fs::exists(p)) return p;
    const fs::path as_preset = preset_dir / (arg + ".json");
    if (fs::exists(as_preset)) return as_preset;
    throw SchemaError("scenario not found: '" + arg + "' (also tried " + as_preset.string() + ")");
}

void write_tables(const report::RunResult& res, const fs::path& out_dir,
                  const std::string& name, const std::string& format,
                  const std::string& hash) {
    io::atomic_write(out_dir / (name + "_report.json"), res.report.dump(2) + "\n");
    if (format == "csv" || format == "both") {
        for (const auto& [suffix, body] : res.tables)
            io::atomic_write(out_dir / (name + "_" + suffix), io::csv_preamble(hash) + body);
    }
    if (format == "json" || format == "both") {
        // Budget JSON already lives in the report; nothing extra to emit.
    }
}

int run_command(const std::string& scenario_arg, const fs::path& preset_dir,
                const fs::path& out_dir, const std::string& format, bool with_checks) {
    const auto path = resolve_scenario_path(scenario_arg, preset_dir);
    auto scn = scenario::load_scenario(path);
    const auto species = io::load_species_table(scenario::species_table_path(preset_dir));
    auto res = report::run_scenario(scn, species);

    if (with_checks) {
        papercheck::Context ctx(preset_dir);
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : papercheck::rows_for_preset(ctx, scn.name, false))
            rows.push_back(row.to_json());
        res.report["paper_checks"] = rows;
    }

    write_tables(res, out_dir, scn.name, format, scn.hash);
    std::printf("wrote %s\n", (out_dir / (scn.name + "_report.json")).string().c_str());
    if (res.report.contains("budget")) {
        const auto& b = res.report.at("budget");
        std::printf("budget: epsilon=%.6g g0=%.6g Hz gN=%.6g Hz strong_coupling=%s\n",
                    b.at("epsilon").get<double>(), b.at("g0_hz").get<double>(),
                    b.at("gN_hz").get<double>(),
                    b.at("strong_coupling").get<bool>() ? "yes" : "no");
    }
    if (res.report.contains("paper_checks")) {
        for (const auto& row : res.report.at("paper_checks")) {
            std::printf("%s %s: computed=%.6g target=%.6g (%s)\n",
                        row.at("pass").get<bool>() ? "PASS" : "FAIL",
                        row.at("id").get<std::string>().c_str(),
                        row.at("computed").get<double>(), row.at("target").get<double>(),
                        row.at("tolerance").get<std::string>().c_str());
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybridsim: coupling budgets and dynamics for atom-oscillator hybrid systems"};
    app.set_version_flag("--version", std::string("hybridsim ") + kVersion);

    fs::path preset_dir = scenario::default_preset_dir();
    fs::path out_dir = ".";
    std::string format = "both";
    int jobs = 1;
    app.add_option("--preset-dir", preset_dir, "preset directory (env HYBRIDSIM_PRESET_DIR)");
    app.add_option("--output-dir", out_dir, "directory for output files");
    app.add_option("--format", format, "table output format: csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    app.add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);

    std::string scenario_arg;
    auto* cmd_run = app.add_subcommand("run", "run one scenario (preset name or file path)");
    cmd_run->add_option("scenario", scenario_arg, "preset name or scenario file")->required();
    bool no_checks = false;
    cmd_run->add_flag("--no-checks", no_checks, "skip the per-preset reference checks");

    auto* cmd_sweep = app.add_subcommand("sweep", "sweep one or two scenario axes");
    std::string sweep_scenario;
    std::string axis1, axis2, scale1 = "linear", scale2 = "linear", mode1;
    double from1 = 0, to1 = 0, from2 = 0, to2 = 0;
    int points1 = 0, points2 = 0;
    cmd_sweep->add_option("scenario", sweep_scenario)->required();
    cmd_sweep->add_option("--axis", axis1, "axis key under parameters/, or dotted path");
    cmd_sweep->add_option("--from", from1);
    cmd_sweep->add_option("--to", to1);
    cmd_sweep->add_option("--points", points1);
    cmd_sweep->add_option("--scale", scale1)->check(CLI::IsMember({"linear", "log"}));
    cmd_sweep->add_option("--mode", mode1, "distance sweeps: retuned or fixed_bare");
    cmd_sweep->add_option("--axis2", axis2);
    cmd_sweep->add_option("--from2", from2);
    cmd_sweep->add_option("--to2", to2);
    cmd_sweep->add_option("--points2", points2);
    cmd_sweep->add_option("--scale2", scale2)->check(CLI::IsMember({"linear", "log"}));

    auto* cmd_check = app.add_subcommand("paper-check", "run the reference regression suite");
    bool list_only = false, fast_only = false;
    cmd_check->add_flag("--list", list_only, "list check ids without running");
    cmd_check->add_flag("--fast", fast_only, "skip the slow (GPE) checks");

    auto* cmd_list = app.add_subcommand("list-presets", "list shipped scenario presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_run) {
            return run_command(scenario_arg, preset_dir, out_dir, format, !no_checks);
        }
        if (*cmd_sweep) {
            const auto path = resolve_scenario_path(sweep_scenario, preset_dir);
            auto scn = scenario::load_scenario(path);
            const auto species = io::load_species_table(scenario::species_table_path(preset_dir));
            std::vector<sweep::Axis> axes;
            if (!axis1.empty()) {
                axes.push_back({axis1, from1, to1, points1, scale1 == "log", mode1});
                if (!axis2.empty())
                    axes.push_back({axis2, from2, to2, points2, scale2 == "log", ""});
            } else {
                axes = sweep::axes_from_scenario(scn);
            }
            if (axes.empty()) throw SchemaError("sweep: no axes given (flags or sweep block)");
            const auto out = sweep::run_sweep(scn, species, axes, jobs);
            const fs::path file = out_dir / (scn.name + "_sweep.csv");
            io::atomic_write(file, out.csv);
            std::printf("wrote %s (%zu rows)\n", file.string().c_str(), out.rows);
            return 0;
        }
        if (*cmd_check) {
            if (list_only) {
                for (const auto& c : papercheck::registry())
                    std::printf("%s%s (preset %s)\n", c.id.c_str(), c.slow ? " [slow]" : "",
                                c.preset.c_str());
                return 0;
            }
            papercheck::Context ctx(preset_dir);
            const auto summary = papercheck::run_all(ctx, !fast_only);
            for (const auto& row : summary.rows) {
                std::printf("%s %-28s computed=%-14.6g target=%-12.6g %s\n",
                            row.pass ? "PASS" : "FAIL", row.id.c_str(), row.computed,
                            row.target, row.tolerance.c_str());
            }
            std::printf("%zu checks, %s\n", summary.rows.size(),
                        summary.all_pass ? "all passed" : "FAILURES PRESENT");
            return summary.all_pass ? 0 : 1;
        }
        if (*cmd_list) {
            for (const auto& entry : fs::directory_iterator(preset_dir)) {
                if (entry.path().extension() != ".json") continue;
                if (entry.path().filename() == "species.json") continue;
                try {
                    const auto scn = scenario::load_scenario(entry.path());
                    std::printf("%-20s scheme=%-16s %s\n", scn.name.c_str(), scn.scheme.c_str(),
                                entry.path().filename().string().c_str());
                } catch (const std::exception& e) {
                    std::printf("%-20s (unreadable: %s)\n",
                                entry.path().filename().string().c_str(), e.what());
                }
            }
            return 0;
        }
        std::cerr << app.help();
        return 2;
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "schema error: %s\n", e.what());
        return 2;
    } catch (const ConvergenceError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 4;
    } catch (const PhysicsError& e) {
        std::fprintf(stderr, "physics error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
