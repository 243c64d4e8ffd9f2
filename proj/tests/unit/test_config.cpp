#include <string>

#include "doctest.h"
#include "json.hpp"
#include "snslab/config.hpp"

using namespace snslab;

namespace {

const char* kMinimal = R"({
  "scenario_id": "minimal",
  "physics": {"nu": 0.5, "sigma": 1.0},
  "grid": {"N": 16, "dt": 0.01},
  "noise": {"kind": "multiplicative"}
})";

bool has_issue(const std::vector<ConfigIssue>& issues, const std::string& path) {
    for (const auto& i : issues) {
        if (i.path == path) return true;
    }
    return false;
}

std::string patched(const std::string& patch) {
    auto j = nlohmann::json::parse(kMinimal);
    j.merge_patch(nlohmann::json::parse(patch));
    return j.dump();
}

}  // namespace

TEST_CASE("a minimal config validates without warnings") {
    const auto r = validate_config_text(kMinimal);
    REQUIRE(r.ok());
    CHECK(r.warnings.empty());
    const auto& c = *r.config;
    CHECK(c.scenario.n == 16);
    CHECK(c.scenario.dt == 0.01);
    CHECK(c.scenario.noise == NoiseKind::Multiplicative);
    CHECK(c.noise_dt == 0.01);
    CHECK(c.noise_t_min <= -100.0);
    const auto echo = nlohmann::json::parse(c.echo);
    CHECK(echo["grid"]["N"] == 16);
    CHECK(echo["physics"]["lambda1"] == 1.0);
    CHECK(echo.contains("pullback"));
}

TEST_CASE("invalid values are reported with their field path") {
    auto r = validate_config_text(patched(R"({"grid": {"dt": 0}})"));
    CHECK_FALSE(r.ok());
    CHECK(has_issue(r.errors, "grid.dt"));

    r = validate_config_text(patched(R"({"grid": {"N": 15}})"));
    CHECK(has_issue(r.errors, "grid.N"));

    r = validate_config_text(patched(R"({"physics": {"nu": -1}})"));
    CHECK(has_issue(r.errors, "physics.nu"));

    r = validate_config_text(patched(R"({"physics": {"lambda1": 2}})"));
    CHECK(has_issue(r.errors, "physics.lambda1"));

    r = validate_config_text(patched(R"({"pullback": {"horizons": [2, 1]}})"));
    CHECK(has_issue(r.errors, "pullback.horizons"));

    r = validate_config_text(patched(R"({"pullback": {"horizons": [1.005]}})"));
    CHECK(has_issue(r.errors, "pullback.horizons[0]"));

    r = validate_config_text("{not json");
    CHECK_FALSE(r.ok());
}

TEST_CASE("additive noise needs a profile") {
    const auto r = validate_config_text(patched(R"({"noise": {"kind": "additive"}})"));
    CHECK_FALSE(r.ok());
    CHECK(has_issue(r.errors, "noise.h"));
}

TEST_CASE("sigma below the additive threshold is a warning that quotes the threshold") {
    const auto r = validate_config_text(
        patched(R"({"noise": {"kind": "additive", "h": {"kind": "taylor_green"}}, "physics": {"sigma": 2.0}})"));
    REQUIRE(r.ok());
    CHECK(r.config->aleph == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.config->sigma_threshold == doctest::Approx(144.0 / 3.141592653589793).epsilon(1e-6));
    REQUIRE(has_issue(r.warnings, "physics.sigma"));
    for (const auto& w : r.warnings) {
        if (w.path == "physics.sigma") CHECK(w.message.find("45.8366") != std::string::npos);
    }
    const auto above = validate_config_text(
        patched(R"({"noise": {"kind": "additive", "h": {"kind": "taylor_green"}}, "physics": {"sigma": 50.0}})"));
    REQUIRE(above.ok());
    CHECK_FALSE(has_issue(above.warnings, "physics.sigma"));
}

TEST_CASE("unknown fields and short noise windows warn") {
    auto r = validate_config_text(patched(R"({"grid": {"dx": 1}})"));
    REQUIRE(r.ok());
    CHECK(has_issue(r.warnings, "grid.dx"));
    r = validate_config_text(patched(R"({"noise": {"t_min": -10}, "pullback": {"horizons": [2]}, "simulate": {"t_start": 0},
                                          "energy": {"t_start": -1}, "flatten": {"horizon": 2}})"));
    CHECK(has_issue(r.warnings, "noise.t_min"));
}

TEST_CASE("field specifications") {
    auto r = validate_config_text(patched(R"({"initial": {"kind": "sum", "terms": [
        {"kind": "taylor_green", "amplitude": 2.0},
        {"kind": "mode", "kx": 1, "ky": 2, "re": 0.5, "im": 0.0}]}})"));
    REQUIRE(r.ok());
    CHECK(r.config->initial.n() == 16);
    r = validate_config_text(patched(R"({"initial": {"kind": "bogus"}})"));
    CHECK(has_issue(r.errors, "initial.kind"));
    r = validate_config_text(patched(R"({"forcing": {"shape": {"kind": "sin_pair", "k": 9}}})"));
    CHECK(has_issue(r.errors, "forcing.shape.k"));
}
