#pragma once

// Subcommand runner: each command reads an ExperimentConfig, writes its CSV
// outputs plus manifest.json into an output directory and reports an exit code.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "snslab/config.hpp"

namespace snslab {

enum class Command { OuVerify, Simulate, Pullback, Autonomy, Flatten, EnergyCheck, Continuity };

std::optional<Command> parse_command(const std::string& name);
std::string command_name(Command c);
std::vector<std::string> command_names();

/// Exit-code contract of the CLI.
enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitNumerical = 3, kExitUnconverged = 4 };

struct OutputFile {
    std::string name;
    std::string sha256;
};

struct RunOutcome {
    int exit_code = kExitOk;
    std::string error_kind;  // "validation", "numerical_abort", "unconverged", "path_coverage"
    std::string message;
    /// Headline numbers of the run (also written to summary.csv), keyed by name.
    std::map<std::string, double> metrics;
    std::vector<OutputFile> outputs;
};

/// Runs one command. Never throws for laboratory errors: they become exit codes,
/// an error.json file and a manifest entry.
RunOutcome run_scenario(Command command, const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Noise realization of a config: the OU path on [noise_t_min, noise_t_max]
/// (or the synthetic constant path when configured).
noise::WienerPath config_wiener(const ExperimentConfig& config);
noise::OUPath config_ou(const ExperimentConfig& config);

/// Library version string recorded in manifests.
std::string library_version();

}  // namespace snslab
