#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "snslab/config.hpp"
#include "snslab/experiments.hpp"

namespace {

using ojson = nlohmann::ordered_json;

void print_issues(const snslab::ConfigResult& r) {
    for (const auto& w : r.warnings) {
        std::cerr << ojson{{"warning", w.path}, {"message", w.message}}.dump() << "\n";
    }
    for (const auto& e : r.errors) {
        std::cerr << ojson{{"error", "validation"}, {"field", e.path}, {"message", e.message}}.dump() << "\n";
    }
}

std::filesystem::path default_out(const snslab::ExperimentConfig& c, const std::string& command) {
    const char* root = std::getenv("SNSLAB_OUT_ROOT");
    const std::filesystem::path base = root != nullptr && *root != '\0' ? root : "runs";
    return base / c.scenario_id / command;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral laboratory for 2D stochastic Navier-Stokes pullback attractors"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed_override;

    auto add_common = [&](CLI::App* sub, bool with_out) {
        sub->add_option("--config", config_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
        if (with_out) {
            sub->add_option("--out", out_dir, "Output directory (default $SNSLAB_OUT_ROOT/<scenario>/<command>)");
            sub->add_option("--threads", threads, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
            sub->add_option("--seed-override", seed_override, "Replace the noise seed of the config");
        }
    };

    CLI::App* validate = app.add_subcommand("validate", "Check a config and print the normalized echo");
    add_common(validate, false);
    for (const auto& name : snslab::command_names()) {
        add_common(app.add_subcommand(name, "Run the " + name + " experiment"), true);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : snslab::kExitValidation;
    }

    snslab::ConfigResult parsed = snslab::validate_config(config_path);
    print_issues(parsed);
    if (!parsed.ok()) return snslab::kExitValidation;
    snslab::ExperimentConfig config = std::move(*parsed.config);

    if (validate->parsed()) {
        std::cout << config.echo << "\n";
        return snslab::kExitOk;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const auto command = snslab::parse_command(sub->get_name());
    if (threads) config.threads = *threads;
    if (seed_override) config.seed = *seed_override;
    const std::filesystem::path out = out_dir.empty() ? default_out(config, sub->get_name()) : std::filesystem::path(out_dir);

    const snslab::RunOutcome outcome = snslab::run_scenario(*command, config, out);
    if (outcome.exit_code != snslab::kExitOk) {
        std::cerr << ojson{{"error", outcome.error_kind},
                           {"message", outcome.message},
                           {"exit_code", outcome.exit_code},
                           {"out", out.string()}}
                         .dump()
                  << "\n";
        return outcome.exit_code;
    }
    for (const auto& [k, v] : outcome.metrics) std::cout << k << " = " << v << "\n";
    std::cout << "outputs written to " << out.string() << "\n";
    return snslab::kExitOk;
}
