#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "hybridsim/io.hpp"

using namespace hybridsim;
namespace fs = std::filesystem;

namespace {

const fs::path kCli = HYBRIDSIM_CLI_PATH;
const fs::path kSource = HYBRIDSIM_SOURCE_DIR;

struct RunOutcome {
    int exit_code = -1;
    std::string output;
};

RunOutcome shell(const std::string& cmd) {
    RunOutcome out;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (fgets(buf.data(), buf.size(), pipe)) out.output += buf.data();
    const int status = pclose(pipe);
    out.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("run on the ion preset emits a passing report") {
    const auto dir = fresh_dir("hs_cli_run");
    const auto r = shell(kCli.string() + " --output-dir " + dir.string() + " run ion_be9");
    INFO(r.output);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "ion_be9_report.json"));
    CHECK(fs::exists(dir / "ion_be9_budget.csv"));
    CHECK(r.output.find("PASS ion_g0_150hz") != std::string::npos);
    CHECK(r.output.find("FAIL") == std::string::npos);

    const auto report = nlohmann::json::parse(io::read_file(dir / "ion_be9_report.json"));
    CHECK(report.at("budget").at("g0_hz").get<double>() > 100.0);
    CHECK(report.at("meta").at("version").get<std::string>() == "0.1.0");

    // Output files embed the scenario hash header.
    const auto csv = io::read_file(dir / "ion_be9_budget.csv");
    CHECK(csv.find("# hybridsim") != std::string::npos);
    CHECK(csv.find("# scenario_hash=") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("run twice produces byte-identical outputs") {
    const auto d1 = fresh_dir("hs_cli_det1");
    const auto d2 = fresh_dir("hs_cli_det2");
    for (const char* preset : {"lattice_membrane", "magnetic_rb87"}) {
        shell(kCli.string() + " --output-dir " + d1.string() + " run " + preset);
        shell(kCli.string() + " --output-dir " + d2.string() + " run " + preset);
        const std::string base = preset;
        CHECK(io::read_file(d1 / (base + "_report.json")) ==
              io::read_file(d2 / (base + "_report.json")));
        CHECK(io::read_file(d1 / (base + "_budget.csv")) ==
              io::read_file(d2 / (base + "_budget.csv")));
    }
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("schema errors exit with code 2") {
    const auto dir = fresh_dir("hs_cli_schema");
    const auto bad = dir / "bad.json";
    {
        std::ofstream out(bad);
        out << R"({"scheme":"ion","species":"Be9+","parameters":{"nonsense":1}})";
    }
    const auto r = shell(kCli.string() + " run " + bad.string());
    CHECK(r.exit_code == 2);

    // Empty sweep grid: validation error, exit 2.
    const auto r2 = shell(kCli.string() + " --output-dir " + dir.string() +
                          " sweep cnt_collective --axis trap_frequency_hz --from 1e4 --to 2e4 "
                          "--points 0");
    CHECK(r2.exit_code == 2);
    fs::remove_all(dir);
}

TEST_CASE("physics-domain errors exit with code 3") {
    const auto dir = fresh_dir("hs_cli_phys");
    const auto bad = dir / "bad_ion.json";
    auto doc = nlohmann::json::parse(
        io::read_file(kSource / "presets" / "ion_be9.json"), nullptr, true, true);
    doc["parameters"]["target_epsilon"] = 500.0; // beyond the compensation bound
    io::atomic_write(bad, doc.dump(2));
    const auto r = shell(kCli.string() + " --output-dir " + dir.string() + " run " +
                         bad.string() + " --no-checks");
    INFO(r.output);
    CHECK(r.exit_code == 3);
    CHECK_FALSE(fs::exists(dir / "ion_be9_report.json")); // no partial outputs
    fs::remove_all(dir);
}

TEST_CASE("sweep command writes ordered rows") {
    const auto dir = fresh_dir("hs_cli_sweep");
    const auto r = shell(kCli.string() + " --output-dir " + dir.string() + " --jobs 2 " +
                         " sweep cnt_collective --axis trap_frequency_hz --from 1.5e4 --to 2.5e4"
                         " --points 4");
    INFO(r.output);
    CHECK(r.exit_code == 0);
    const auto csv = io::read_file(dir / "cnt_collective_sweep.csv");
    CHECK(csv.find("trap_frequency_hz,epsilon,g0_hz") != std::string::npos);
    // Rows sorted by grid order.
    const auto p15 = csv.find("\n15000");
    const auto p25 = csv.find("\n25000");
    CHECK(p15 != std::string::npos);
    CHECK(p25 != std::string::npos);
    CHECK(p15 < p25);
    fs::remove_all(dir);
}

TEST_CASE("distance sweep emits the trapscape table") {
    const auto dir = fresh_dir("hs_cli_dsweep");
    const auto r = shell(kCli.string() + " --output-dir " + dir.string() +
                         " sweep bec_cantilever --axis distance_m --from 1e-6 --to 3e-6 "
                         "--points 5");
    INFO(r.output);
    CHECK(r.exit_code == 0);
    const auto csv = io::read_file(dir / "bec_cantilever_sweep.csv");
    CHECK(csv.find("d_m,U0_over_hbar_omega,epsilon,omega_a_hz,vanished") != std::string::npos);
    CHECK(csv.find("# epsilon_convention=eq7_at_minimum") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("list-presets shows the seven scenarios") {
    const auto r = shell(kCli.string() + " list-presets");
    CHECK(r.exit_code == 0);
    for (const char* name : {"ion_be9", "bec_cantilever", "cnt_collective", "cnt_single",
                             "lattice_membrane", "magnetic_rb87", "cavity_reference"})
        CHECK(r.output.find(name) != std::string::npos);
}

TEST_CASE("paper-check --list prints ids without running") {
    const auto r = shell(kCli.string() + " paper-check --list");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("ion_voltage_90v") != std::string::npos);
    CHECK(r.output.find("gpe_loss_resonance_centered [slow]") != std::string::npos);
    CHECK(r.output.find("PASS") == std::string::npos);
}

TEST_CASE("paper-check --fast passes on shipped presets") {
    const auto r = shell(kCli.string() + " paper-check --fast");
    INFO(r.output);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("all passed") != std::string::npos);
}

TEST_CASE("tampered preset makes paper-check fail with exit 1") {
    const auto dir = fresh_dir("hs_cli_tamper");
    for (const auto& e : fs::directory_iterator(kSource / "presets"))
        fs::copy(e.path(), dir / e.path().filename());
    auto doc = nlohmann::json::parse(io::read_file(dir / "ion_be9.json"), nullptr, true, true);
    doc["parameters"].erase("target_epsilon");
    doc["parameters"]["voltage_v"] = 9.0;
    io::atomic_write(dir / "ion_be9.json", doc.dump(2));

    const auto r = shell("HYBRIDSIM_PRESET_DIR=" + dir.string() + " " + kCli.string() +
                         " paper-check --fast");
    INFO(r.output);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("FAIL ion_g0_150hz") != std::string::npos);
    fs::remove_all(dir);
}
