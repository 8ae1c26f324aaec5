// commands.hpp: the CLI commands as library calls.
//
// Each command writes its artifacts into `dir` and returns the JSON summary
// it wrote. NumericalError propagates; the caller turns it into error.json.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "app/config.hpp"
#include "app/output.hpp"
#include "cascade/execution.hpp"

namespace cascade::app {

using std::filesystem::path;

json run_rates(const Scenario& s, const path& dir);
json run_evolve(const Scenario& s, const path& dir, Execution exec = Execution::parallel);
json run_spectra(const Scenario& s, const path& dir, Execution exec = Execution::parallel);
json run_oracle(const Scenario& s, const path& dir, Execution exec = Execution::parallel);
json run_sweep(const Scenario& s, const path& dir, Execution exec = Execution::parallel);

// Every command the scenario has settings for, in order rates, evolve,
// spectra, oracle, sweep.
json run_all(const Scenario& s, const path& dir, Execution exec = Execution::parallel);

// The built-in regime presets, one directory each under `out`.
struct Preset {
    std::string name;
    std::string text;
};
const std::vector<Preset>& regime_presets();
json run_regimes(const path& out, Execution exec = Execution::parallel);

void write_error(const path& dir, const Scenario& s, const std::string& kind,
                 const std::string& message);

} // namespace cascade::app
