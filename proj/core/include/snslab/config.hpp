#pragma once

// JSON scenario files. Every field has an explicit default, and the parsed
// configuration is echoed back (defaults filled in) into each manifest.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "snslab/radii.hpp"
#include "snslab/solver.hpp"

namespace snslab {

struct OuVerifySettings {
    double sigma = 1.0;
    double dt = 0.05;
    double t_min = -200.0;
    double t_max = 10000.0;
    double delta = 0.1;
    double decay_time = 100.0;
    double moment_tolerance = 0.05;  // relative, on E|z|^2
    double ergodic_bound = 0.05;
    double decay_bound = 1e-3;
    int path_stride = 100;  // rows of the exported (t, W, z) CSV
};

struct SimulateSettings {
    double t_start = 0.0;
    double t_end = 1.0;
    int stride = 1;
};

struct PullbackSettings {
    double tau = 0.0;
    std::vector<double> taus{0.0, -2.0, -4.0, -6.0, -8.0, -10.0};
    std::vector<double> horizons{2.0, 4.0, 8.0, 16.0, 24.0, 32.0};
    int members = 64;
    double R0 = -1.0;  // < 0: twice the absorbing radius at tau
    double stabilization = 1e-3;
    std::uint64_t ensemble_seed = 1;
};

struct FlattenSettings {
    double horizon = 32.0;
    std::vector<double> lambda_targets{1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0};
};

struct EnergySettings {
    double t_start = -10.0;
    double t_end = 0.0;
    double c_tol = 1.0;  // residual tolerance = c_tol * dt * scale
};

struct ContinuitySettings {
    std::vector<double> amplitudes{0.4, 0.2, 0.1, 0.05};
    double tau = 0.0;
    double T = 2.0;
};

struct ExperimentConfig {
    std::string scenario_id = "unnamed";
    ScenarioConfig scenario;
    std::uint64_t seed = 1;     // Wiener path seed
    double noise_t_min = -200.0;
    double noise_t_max = 2.0;
    double noise_dt = 0.01;  // grid of the Wiener/OU path, independent of the solver step
    std::optional<double> constant_z;  // synthetic z == c instead of an OU path
    std::string initial_kind = "zero";  // initial condition for simulate / energy-check / continuity
    SpectralField initial;
    RadiusOptions radii;
    double sigma_floor = 1e-3;
    int threads = 1;

    OuVerifySettings ou;
    SimulateSettings simulate;
    PullbackSettings pullback;
    FlattenSettings flatten;
    EnergySettings energy;
    ContinuitySettings continuity;

    /// Additive scenarios: aleph of h and the sigma threshold built from it.
    double aleph = 0.0;
    double sigma_threshold = 0.0;

    /// Normalized JSON echo of the configuration with defaults filled in.
    std::string echo;
};

struct ConfigIssue {
    std::string path;  // e.g. "grid.dt"
    std::string message;
};

struct ConfigResult {
    std::optional<ExperimentConfig> config;
    std::vector<ConfigIssue> errors;
    std::vector<ConfigIssue> warnings;
    bool ok() const { return config.has_value() && errors.empty(); }
};

ConfigResult validate_config_text(const std::string& json_text);
ConfigResult validate_config(const std::filesystem::path& path);

/// Default constant of the additive radii, 6 / (nu l1) * max(1, G^2, c_h^2) with
/// G = sigma |h| + nu |A h| and c_h = |B(h, h)|.
double additive_constant_default(const ScenarioConfig& cfg);

}  // namespace snslab
