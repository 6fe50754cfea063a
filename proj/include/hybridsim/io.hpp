#ifndef HYBRIDSIM_IO_HPP
#define HYBRIDSIM_IO_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hybridsim/errors.hpp"
#include "hybridsim/types.hpp"
#include "hybridsim/version.hpp"

namespace hybridsim::io {

// FNV-1a, stable across platforms; used to stamp outputs with the scenario
// content hash.
inline std::string fnv1a_hex(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Write-then-rename so failures never leave partial files behind.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw SchemaError("cannot open for writing: " + tmp.string());
        out << content;
        if (!out.good()) {
            fs::remove(tmp);
            throw SchemaError("write failed: " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

// Header block embedded in every output file: tool version, scenario hash,
// unit conventions.
inline std::string csv_preamble(const std::string& scenario_hash) {
    std::string s;
    s += "# hybridsim ";
    s += kVersion;
    s += "\n# scenario_hash=";
    s += scenario_hash;
    s += "\n# units: SI; frequency columns in Hz (converted from internal rad/s)\n";
    return s;
}

inline nlohmann::ordered_json json_meta(const std::string& scenario_hash) {
    nlohmann::ordered_json j;
    j["tool"] = "hybridsim";
    j["version"] = kVersion;
    j["scenario_hash"] = scenario_hash;
    j["units"] = "SI; *_hz keys in Hz, internal frequencies rad/s";
    return j;
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// --- species table ----------------------------------------------------------

inline AtomSpecies species_from_json(const std::string& name, const nlohmann::json& j) {
    AtomSpecies s;
    s.name = name;
    s.mass = j.at("mass_kg").get<double>();
    s.static_polarizability = j.value("static_polarizability_si", 0.0);
    s.charge = j.value("charge_c", 0.0);
    if (j.contains("hyperfine_g_factors"))
        for (const auto& [k, v] : j.at("hyperfine_g_factors").items())
            s.hyperfine_g_factors[k] = v.get<double>();
    if (j.contains("hyperfine_splitting_hz"))
        s.hyperfine_splitting = hz_to_angular(j.at("hyperfine_splitting_hz").get<double>());
    s.validate();
    return s;
}

inline std::map<std::string, AtomSpecies> load_species_table(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path), nullptr, true, true);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("species table parse error: " + std::string(e.what()));
    }
    std::map<std::string, AtomSpecies> table;
    for (const auto& [name, body] : j.at("species").items())
        table[name] = species_from_json(name, body);
    return table;
}

} // namespace hybridsim::io

#endif
