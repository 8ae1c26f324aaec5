// config.hpp: scenario files.
//
// A scenario is a flat INI file. Every section except [scenario], [system],
// [density_y] and [density_z] is optional until a command needs it; missing
// keys raise ConfigError naming "section.key". The schema is in README.md.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cascade/quadrature.hpp"
#include "cascade/rates.hpp"
#include "cascade/spectra.hpp"

namespace cascade::app {

struct EvolveSettings {
    double lifetimes = 3.0; // T = lifetimes / lambda~0 unless t_final is set
    std::optional<double> t_final;
    double h = 0.0;
    double t_min = 0.0;     // start of the comparison window; 0 means 10 / |omega01|
    bool check_step = false;
};

struct SweepSettings {
    std::vector<double> lambda1;
};

struct OracleSettings {
    std::size_t ny = 0;
    std::size_t nz = 0;
    double y_lo = 0.0;
    double y_hi = 0.0;
    double z_lo = 0.0;
    double z_hi = 0.0;
    double t_fraction = 0.45; // T = t_fraction * T_rec unless t_final is set
    std::optional<double> t_final;
    double dt_fraction = 0.02; // dt = dt_fraction / max detuning
    std::size_t sample_every = 10;
    bool joint_csv = false;
};

enum class JointOutput { none, triples, matrix };

struct Scenario {
    std::string name;
    CascadeSystem system;
    QuadratureOptions quadrature;
    GridSpec grid;
    std::optional<EvolveSettings> evolve;
    std::optional<SweepSettings> sweep;
    std::optional<OracleSettings> oracle;
    JointOutput joint = JointOutput::none;
    std::string text;     // the file as read
    std::uint64_t hash = 0; // over the text and any table files
};

// FNV-1a, 64 bit.
std::uint64_t fnv1a(const std::string& bytes);
std::string hex(std::uint64_t h);

// `base` resolves relative table paths.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base = {});
Scenario load_scenario(const std::filesystem::path& path);

} // namespace cascade::app
