// cascade: scenario-driven front end.
//
//   cascade <command> --config <path> [--out <dir>] [--threads N]
//
// Exit status 0 on success, 1 on a configuration error, 2 on a numerical
// failure (error.json names the failure kind).

#include <CLI11.hpp>

#include <iostream>

#include "app/commands.hpp"
#include "cascade/errors.hpp"

using namespace cascade;
using namespace cascade::app;

int main(int argc, char** argv) {
    CLI::App cli{"Two-step cascade decay: rates, amplitudes, spectra and a brute-force oracle"};
    cli.require_subcommand(1);

    std::string config;
    std::string out = "out";
    int threads = 0;
    bool serial = false;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"rates", "complex decay constants, Golden rule and corrected energies (JSON)"},
        {"evolve", "Volterra and Markov amplitude traces (CSV)"},
        {"spectra", "joint, marginal and sum-energy spectra (CSV, SVG, JSON)"},
        {"oracle", "discretized-continuum verification report (JSON)"},
        {"sweep", "decay rate against the intermediate width lambda1 (CSV)"},
        {"run", "every command the scenario has settings for"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = cli.add_subcommand(name, help);
        sub->add_option("--config", config, "scenario file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output root; artifacts go to <out>/<scenario name>");
        sub->add_option("--threads", threads, "OpenMP threads (0: runtime default)")
            ->check(CLI::NonNegativeNumber);
        sub->add_flag("--serial", serial, "use the serial reference kernels");
    }
    CLI::App* regimes = cli.add_subcommand("regimes", "run the three built-in regime presets");
    regimes->add_option("--out", out, "output root; one directory per preset");
    regimes->add_option("--threads", threads, "OpenMP threads (0: runtime default)")
        ->check(CLI::NonNegativeNumber);
    regimes->add_flag("--serial", serial, "use the serial reference kernels");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (threads > 0) set_thread_count(threads);
    const Execution exec = serial ? Execution::serial : Execution::parallel;
    const std::string cmd = cli.get_subcommands().front()->get_name();

    if (cmd == "regimes") {
        try {
            run_regimes(out, exec);
            return 0;
        } catch (const NumericalError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 1;
        }
    }

    Scenario s;
    try {
        s = load_scenario(config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    const path dir = path(out) / s.name;
    try {
        if (cmd == "rates") run_rates(s, dir);
        else if (cmd == "evolve") run_evolve(s, dir, exec);
        else if (cmd == "spectra") run_spectra(s, dir, exec);
        else if (cmd == "oracle") run_oracle(s, dir, exec);
        else if (cmd == "sweep") run_sweep(s, dir, exec);
        else run_all(s, dir, exec);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        write_error(dir, s, std::string(e.name()), e.what());
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cout << "wrote " << dir.string() << "\n";
    return 0;
}
