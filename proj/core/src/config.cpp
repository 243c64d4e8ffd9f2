#include "snslab/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "snslab/attractor.hpp"
#include "snslab/errors.hpp"
#include "snslab/io.hpp"
#include "snslab/spectral_ops.hpp"

namespace snslab {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

// Typed accessors that record problems against dotted field paths instead of throwing.
class Reader {
public:
    explicit Reader(ConfigResult& r) : r_(r) {}

    void error(const std::string& path, const std::string& msg) { r_.errors.push_back({path, msg}); }
    void warn(const std::string& path, const std::string& msg) { r_.warnings.push_back({path, msg}); }

    const json* object(const json& parent, const std::string& prefix, const std::string& key, bool required = false) {
        const std::string path = join(prefix, key);
        if (!parent.contains(key)) {
            if (required) error(path, "missing required section");
            return nullptr;
        }
        const json& v = parent.at(key);
        if (!v.is_object()) {
            error(path, "expected an object");
            return nullptr;
        }
        return &v;
    }

    double number(const json* parent, const std::string& prefix, const std::string& key, double def,
                  bool required = false) {
        const std::string path = join(prefix, key);
        if (parent == nullptr || !parent->contains(key)) {
            if (required) error(path, "missing required field");
            return def;
        }
        const json& v = parent->at(key);
        if (!v.is_number()) {
            error(path, "expected a number");
            return def;
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) error(path, "must be finite");
        return x;
    }

    long integer(const json* parent, const std::string& prefix, const std::string& key, long def,
                 bool required = false) {
        const std::string path = join(prefix, key);
        if (parent == nullptr || !parent->contains(key)) {
            if (required) error(path, "missing required field");
            return def;
        }
        const json& v = parent->at(key);
        if (!v.is_number_integer()) {
            error(path, "expected an integer");
            return def;
        }
        return v.get<long>();
    }

    std::string string(const json* parent, const std::string& prefix, const std::string& key, const std::string& def,
                       bool required = false) {
        const std::string path = join(prefix, key);
        if (parent == nullptr || !parent->contains(key)) {
            if (required) error(path, "missing required field");
            return def;
        }
        const json& v = parent->at(key);
        if (!v.is_string()) {
            error(path, "expected a string");
            return def;
        }
        return v.get<std::string>();
    }

    std::vector<double> numbers(const json* parent, const std::string& prefix, const std::string& key,
                                std::vector<double> def) {
        const std::string path = join(prefix, key);
        if (parent == nullptr || !parent->contains(key)) return def;
        const json& v = parent->at(key);
        if (!v.is_array()) {
            error(path, "expected an array of numbers");
            return def;
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) {
                error(path + "[" + std::to_string(i) + "]", "expected a number");
                return def;
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    void unknown_keys(const json* obj, const std::string& prefix, std::set<std::string> known) {
        if (obj == nullptr) return;
        for (const auto& [k, _] : obj->items()) {
            if (!known.count(k)) warn(join(prefix, k), "unknown field ignored");
        }
    }

private:
    ConfigResult& r_;
};

bool on_grid(double t, double dt) {
    const double x = t / dt;
    return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x));
}

// Field shapes: zero, taylor_green, sin_pair, shear, mode, random, sum, file.
std::optional<SpectralField> parse_field(Reader& rd, const json& spec, const std::string& path, int n, ojson& echo) {
    if (!spec.is_object()) {
        rd.error(path, "expected a field object with a \"kind\"");
        return std::nullopt;
    }
    const std::string kind = rd.string(&spec, path, "kind", "", true);
    echo["kind"] = kind;
    if (kind == "zero") {
        rd.unknown_keys(&spec, path, {"kind"});
        return SpectralField(n);
    }
    if (kind == "taylor_green") {
        rd.unknown_keys(&spec, path, {"kind", "amplitude"});
        const double a = rd.number(&spec, path, "amplitude", 1.0);
        echo["amplitude"] = a;
        return taylor_green(n, a);
    }
    if (kind == "sin_pair" || kind == "shear") {
        rd.unknown_keys(&spec, path, {"kind", "k", "amplitude"});
        const long k = rd.integer(&spec, path, "k", 1);
        const double a = rd.number(&spec, path, "amplitude", 1.0);
        echo["k"] = k;
        echo["amplitude"] = a;
        if (k < 1 || k > dealias_cutoff(n)) {
            rd.error(join(path, "k"), "must lie in [1, " + std::to_string(dealias_cutoff(n)) + "]");
            return std::nullopt;
        }
        return kind == "shear" ? shear_x(n, static_cast<int>(k), a) : sin_pair(n, static_cast<int>(k), a);
    }
    if (kind == "mode") {
        rd.unknown_keys(&spec, path, {"kind", "kx", "ky", "re", "im"});
        const long kx = rd.integer(&spec, path, "kx", 1);
        const long ky = rd.integer(&spec, path, "ky", 0);
        const double re = rd.number(&spec, path, "re", 1.0);
        const double im = rd.number(&spec, path, "im", 0.0);
        echo["kx"] = kx;
        echo["ky"] = ky;
        echo["re"] = re;
        echo["im"] = im;
        try {
            return single_mode(n, static_cast<int>(kx), static_cast<int>(ky), cplx(re, im));
        } catch (const ValidationError& e) {
            rd.error(path, e.what());
            return std::nullopt;
        }
    }
    if (kind == "random") {
        rd.unknown_keys(&spec, path, {"kind", "norm", "seed", "stream"});
        const double norm = rd.number(&spec, path, "norm", 1.0);
        const long seed = rd.integer(&spec, path, "seed", 1);
        const long stream = rd.integer(&spec, path, "stream", 3);
        echo["norm"] = norm;
        echo["seed"] = seed;
        echo["stream"] = stream;
        return random_field(n, static_cast<std::uint64_t>(seed), static_cast<std::uint64_t>(stream), norm);
    }
    if (kind == "sum") {
        rd.unknown_keys(&spec, path, {"kind", "terms"});
        if (!spec.contains("terms") || !spec.at("terms").is_array()) {
            rd.error(join(path, "terms"), "expected an array of field objects");
            return std::nullopt;
        }
        SpectralField total(n);
        echo["terms"] = ojson::array();
        for (std::size_t i = 0; i < spec.at("terms").size(); ++i) {
            ojson sub;
            auto f = parse_field(rd, spec.at("terms")[i], path + ".terms[" + std::to_string(i) + "]", n, sub);
            echo["terms"].push_back(sub);
            if (!f) return std::nullopt;
            total += *f;
        }
        return total;
    }
    if (kind == "file") {
        rd.unknown_keys(&spec, path, {"kind", "path"});
        const std::string file = rd.string(&spec, path, "path", "", true);
        echo["path"] = file;
        try {
            return leray_project(read_field_snapshot(file, n));
        } catch (const Error& e) {
            rd.error(join(path, "path"), e.what());
            return std::nullopt;
        }
    }
    rd.error(join(path, "kind"), "unknown field kind '" + kind + "'");
    return std::nullopt;
}

}  // namespace

double additive_constant_default(const ScenarioConfig& cfg) {
    if (cfg.h.n() != cfg.n) return 6.0 / (cfg.nu * cfg.lambda1);
    const double g = cfg.sigma * norm_H(cfg.h) + cfg.nu * norm_DA(cfg.h);
    const double ch = norm_H(nonlinear_B(cfg.h));
    return 6.0 / (cfg.nu * cfg.lambda1) * std::max({1.0, g * g, ch * ch});
}

ConfigResult validate_config_text(const std::string& text) {
    ConfigResult result;
    Reader rd(result);
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        rd.error("", std::string("invalid JSON: ") + e.what());
        return result;
    }
    if (!root.is_object()) {
        rd.error("", "top level must be an object");
        return result;
    }
    rd.unknown_keys(&root, "",
                    {"scenario_id", "seed", "threads", "physics", "noise", "grid", "forcing", "initial", "blowup_factor",
                     "radii", "sigma_floor", "ou", "simulate", "pullback", "flatten", "energy", "continuity"});

    ExperimentConfig c;
    ojson echo;
    c.scenario_id = rd.string(&root, "", "scenario_id", "unnamed");
    c.seed = static_cast<std::uint64_t>(rd.integer(&root, "", "seed", 1));
    c.threads = static_cast<int>(rd.integer(&root, "", "threads", 1));
    if (c.threads < 1) rd.error("threads", "must be >= 1");
    echo["scenario_id"] = c.scenario_id;
    echo["seed"] = c.seed;
    echo["threads"] = c.threads;

    ScenarioConfig& s = c.scenario;
    const json* physics = rd.object(root, "", "physics", true);
    s.nu = rd.number(physics, "physics", "nu", 0.0, true);
    s.sigma = rd.number(physics, "physics", "sigma", 0.0, true);
    s.lambda1 = rd.number(physics, "physics", "lambda1", 1.0);
    rd.unknown_keys(physics, "physics", {"nu", "sigma", "lambda1"});
    if (physics && physics->contains("nu") && !(s.nu > 0.0)) rd.error("physics.nu", "must be > 0");
    if (physics && physics->contains("sigma") && !(s.sigma > 0.0)) rd.error("physics.sigma", "must be > 0");
    if (s.lambda1 != 1.0) rd.error("physics.lambda1", "the 2*pi torus has lambda1 = 1");
    echo["physics"] = {{"nu", s.nu}, {"sigma", s.sigma}, {"lambda1", s.lambda1}};

    const json* grid = rd.object(root, "", "grid", true);
    s.n = static_cast<int>(rd.integer(grid, "grid", "N", 32, true));
    s.dt = rd.number(grid, "grid", "dt", 0.0, true);
    rd.unknown_keys(grid, "grid", {"N", "dt"});
    bool grid_ok = true;
    if (s.n < 8 || s.n % 2 != 0 || s.n > 1024) {
        rd.error("grid.N", "must be even and in [8, 1024]");
        grid_ok = false;
    }
    if (!(s.dt > 0.0)) {
        rd.error("grid.dt", "must be > 0");
        grid_ok = false;
    }
    echo["grid"] = {{"N", s.n}, {"dt", s.dt}};
    if (!grid_ok) return result;

    s.blowup_factor = rd.number(&root, "", "blowup_factor", 1e6);
    if (!(s.blowup_factor > 0.0)) rd.error("blowup_factor", "must be > 0");
    echo["blowup_factor"] = s.blowup_factor;

    const json* noise = rd.object(root, "", "noise", true);
    const std::string kind = rd.string(noise, "noise", "kind", "multiplicative", true);
    if (kind == "multiplicative") {
        s.noise = NoiseKind::Multiplicative;
    } else if (kind == "additive") {
        s.noise = NoiseKind::Additive;
    } else {
        rd.error("noise.kind", "must be 'multiplicative' or 'additive'");
    }
    c.noise_t_min = rd.number(noise, "noise", "t_min", -200.0);
    const bool explicit_t_max = noise && noise->contains("t_max");
    c.noise_t_max = rd.number(noise, "noise", "t_max", 0.0);
    c.noise_dt = rd.number(noise, "noise", "dt", 0.01);
    if (!(c.noise_dt > 0.0)) {
        rd.error("noise.dt", "must be > 0");
        c.noise_dt = 0.01;
    }
    if (noise && noise->contains("seed")) c.seed = static_cast<std::uint64_t>(rd.integer(noise, "noise", "seed", 1));
    if (noise && noise->contains("constant_z")) c.constant_z = rd.number(noise, "noise", "constant_z", 0.0);
    rd.unknown_keys(noise, "noise", {"kind", "t_min", "t_max", "dt", "seed", "h", "constant_z"});
    ojson echo_noise = {{"kind", kind}, {"seed", c.seed}};
    if (c.constant_z) echo_noise["constant_z"] = *c.constant_z;
    if (noise && noise->contains("h")) {
        ojson he;
        auto h = parse_field(rd, noise->at("h"), "noise.h", s.n, he);
        if (h) s.h = std::move(*h);
        echo_noise["h"] = he;
    }
    if (s.noise == NoiseKind::Additive) {
        if (s.h.n() != s.n) {
            if (!(noise && noise->contains("h"))) rd.error("noise.h", "additive noise requires a profile h");
        } else if (!std::isfinite(norm_DA(s.h))) {
            rd.error("noise.h", "h must have a finite D(A) norm");
        }
    }

    const json* forcing = rd.object(root, "", "forcing");
    ojson echo_forcing;
    {
        const std::string fk = rd.string(forcing, "forcing", "kind", "constant");
        echo_forcing["kind"] = fk;
        SpectralField shape(s.n);
        if (forcing && forcing->contains("shape")) {
            ojson se;
            auto f = parse_field(rd, forcing->at("shape"), "forcing.shape", s.n, se);
            if (f) shape = std::move(*f);
            echo_forcing["shape"] = se;
        } else {
            echo_forcing["shape"] = {{"kind", "zero"}};
        }
        rd.unknown_keys(forcing, "forcing", {"kind", "shape", "times", "amplitudes"});
        if (fk == "example") {
            s.forcing = Forcing::example(shape);
        } else if (fk == "constant") {
            s.forcing = Forcing::constant(shape);
        } else if (fk == "table") {
            auto times = rd.numbers(forcing, "forcing", "times", {});
            auto amps = rd.numbers(forcing, "forcing", "amplitudes", {});
            echo_forcing["times"] = times;
            echo_forcing["amplitudes"] = amps;
            try {
                s.forcing = Forcing::table(shape, times, amps);
            } catch (const ValidationError& e) {
                rd.error("forcing.times", e.what());
            }
        } else {
            rd.error("forcing.kind", "must be 'example', 'constant' or 'table'");
        }
    }
    if (s.forcing.shape().n() != s.n) s.forcing = Forcing::zero(s.n);

    ojson echo_initial;
    if (root.contains("initial")) {
        auto f = parse_field(rd, root.at("initial"), "initial", s.n, echo_initial);
        c.initial_kind = echo_initial.value("kind", "zero");
        if (f) c.initial = std::move(*f);
    } else {
        echo_initial["kind"] = "zero";
    }
    if (c.initial.n() != s.n) c.initial = SpectralField(s.n);

    const json* radii = rd.object(root, "", "radii");
    c.radii.ds = rd.number(radii, "radii", "ds", 0.25);
    c.radii.j_max = static_cast<int>(rd.integer(radii, "radii", "j_max", 56));
    c.radii.truncation_digits = rd.number(radii, "radii", "truncation_digits", 8.0);
    c.radii.c_mult = rd.number(radii, "radii", "C_mult", 1.0);
    c.radii.c_add = rd.number(radii, "radii", "C_add", -1.0);
    rd.unknown_keys(radii, "radii", {"ds", "j_max", "truncation_digits", "C_mult", "C_add"});
    if (!(c.radii.ds > 0.0)) rd.error("radii.ds", "must be > 0");
    if (c.radii.j_max < 0) rd.error("radii.j_max", "must be >= 0");
    if (!(c.radii.truncation_digits > 0.0)) rd.error("radii.truncation_digits", "must be > 0");
    if (!(c.radii.c_mult > 0.0)) rd.error("radii.C_mult", "must be > 0");
    c.sigma_floor = rd.number(&root, "", "sigma_floor", 1e-3);
    if (!(c.sigma_floor > 0.0)) rd.error("sigma_floor", "must be > 0");

    const json* ou = rd.object(root, "", "ou");
    c.ou.sigma = rd.number(ou, "ou", "sigma", s.sigma);
    c.ou.dt = rd.number(ou, "ou", "dt", 0.05);
    c.ou.t_min = rd.number(ou, "ou", "t_min", -200.0);
    c.ou.t_max = rd.number(ou, "ou", "t_max", 10000.0);
    c.ou.delta = rd.number(ou, "ou", "delta", 0.1);
    c.ou.decay_time = rd.number(ou, "ou", "decay_time", 100.0);
    c.ou.moment_tolerance = rd.number(ou, "ou", "moment_tolerance", 0.05);
    c.ou.ergodic_bound = rd.number(ou, "ou", "ergodic_bound", 0.05);
    c.ou.decay_bound = rd.number(ou, "ou", "decay_bound", 1e-3);
    c.ou.path_stride = static_cast<int>(rd.integer(ou, "ou", "path_stride", 100));
    rd.unknown_keys(ou, "ou",
                    {"sigma", "dt", "t_min", "t_max", "delta", "decay_time", "moment_tolerance", "ergodic_bound",
                     "decay_bound", "path_stride"});
    if (!(c.ou.sigma > 0.0)) rd.error("ou.sigma", "must be > 0");
    if (!(c.ou.dt > 0.0)) rd.error("ou.dt", "must be > 0");
    if (c.ou.path_stride < 1) rd.error("ou.path_stride", "must be >= 1");
    if (c.ou.dt > 0.0 && !(c.ou.t_min <= -c.ou.decay_time && c.ou.t_max > 0.0 && on_grid(c.ou.t_min, c.ou.dt) &&
                           on_grid(c.ou.t_max, c.ou.dt) && on_grid(c.ou.decay_time, c.ou.dt))) {
        rd.error("ou.t_min", "window must contain [-decay_time, 0] and lie on the ou.dt grid");
    }

    const json* sim = rd.object(root, "", "simulate");
    c.simulate.t_start = rd.number(sim, "simulate", "t_start", 0.0);
    c.simulate.t_end = rd.number(sim, "simulate", "t_end", 1.0);
    c.simulate.stride = static_cast<int>(rd.integer(sim, "simulate", "stride", 1));
    rd.unknown_keys(sim, "simulate", {"t_start", "t_end", "stride"});
    if (!(c.simulate.t_end > c.simulate.t_start)) rd.error("simulate.t_end", "must exceed simulate.t_start");
    if (c.simulate.stride < 1) rd.error("simulate.stride", "must be >= 1");

    const json* pb = rd.object(root, "", "pullback");
    c.pullback.tau = rd.number(pb, "pullback", "tau", 0.0);
    c.pullback.taus = rd.numbers(pb, "pullback", "taus", c.pullback.taus);
    c.pullback.horizons = rd.numbers(pb, "pullback", "horizons", c.pullback.horizons);
    c.pullback.members = static_cast<int>(rd.integer(pb, "pullback", "members", 64));
    c.pullback.R0 = rd.number(pb, "pullback", "R0", -1.0);
    c.pullback.stabilization = rd.number(pb, "pullback", "stabilization", 1e-3);
    c.pullback.ensemble_seed = static_cast<std::uint64_t>(rd.integer(pb, "pullback", "ensemble_seed", 1));
    rd.unknown_keys(pb, "pullback", {"tau", "taus", "horizons", "members", "R0", "stabilization", "ensemble_seed"});
    if (c.pullback.members < 1) rd.error("pullback.members", "must be >= 1");
    if (c.pullback.horizons.empty()) rd.error("pullback.horizons", "must not be empty");
    for (std::size_t i = 0; i < c.pullback.horizons.size(); ++i) {
        const double h = c.pullback.horizons[i];
        if (!(h > 0.0) || (i > 0 && !(h > c.pullback.horizons[i - 1]))) {
            rd.error("pullback.horizons", "must be positive and strictly increasing");
            break;
        }
        if (!on_grid(h, s.dt)) rd.error("pullback.horizons[" + std::to_string(i) + "]", "not a multiple of grid.dt");
    }
    for (std::size_t i = 0; i < c.pullback.taus.size(); ++i) {
        if (c.pullback.taus[i] > 0.0 || (i > 0 && !(c.pullback.taus[i] < c.pullback.taus[i - 1]))) {
            rd.error("pullback.taus", "must be <= 0 and strictly decreasing");
            break;
        }
        if (!on_grid(c.pullback.taus[i], s.dt)) rd.error("pullback.taus[" + std::to_string(i) + "]", "not a multiple of grid.dt");
    }
    if (!on_grid(c.pullback.tau, s.dt)) rd.error("pullback.tau", "not a multiple of grid.dt");
    if (!(c.pullback.stabilization > 0.0)) rd.error("pullback.stabilization", "must be > 0");

    const json* fl = rd.object(root, "", "flatten");
    c.flatten.horizon = rd.number(fl, "flatten", "horizon", 32.0);
    c.flatten.lambda_targets = rd.numbers(fl, "flatten", "lambda_targets", c.flatten.lambda_targets);
    rd.unknown_keys(fl, "flatten", {"horizon", "lambda_targets"});
    if (!(c.flatten.horizon > 0.0) || !on_grid(c.flatten.horizon, s.dt)) {
        rd.error("flatten.horizon", "must be positive and a multiple of grid.dt");
    }

    const json* en = rd.object(root, "", "energy");
    c.energy.t_start = rd.number(en, "energy", "t_start", -10.0);
    c.energy.t_end = rd.number(en, "energy", "t_end", 0.0);
    c.energy.c_tol = rd.number(en, "energy", "c_tol", 1.0);
    rd.unknown_keys(en, "energy", {"t_start", "t_end", "c_tol"});
    if (!(c.energy.t_end > c.energy.t_start)) rd.error("energy.t_end", "must exceed energy.t_start");
    if (!(c.energy.c_tol > 0.0)) rd.error("energy.c_tol", "must be > 0");

    const json* co = rd.object(root, "", "continuity");
    c.continuity.amplitudes = rd.numbers(co, "continuity", "amplitudes", c.continuity.amplitudes);
    c.continuity.tau = rd.number(co, "continuity", "tau", 0.0);
    c.continuity.T = rd.number(co, "continuity", "T", 2.0);
    rd.unknown_keys(co, "continuity", {"amplitudes", "tau", "T"});
    if (!(c.continuity.T > 0.0)) rd.error("continuity.T", "must be > 0");

    // Noise window: must contain 0, every simulated interval and the pullback horizons.
    const double needed_max = std::max({2.0, c.simulate.t_end, c.energy.t_end, c.continuity.tau + c.continuity.T});
    if (!explicit_t_max) c.noise_t_max = std::ceil(needed_max / c.noise_dt - 1e-9) * c.noise_dt;
    const double deepest_pullback =
        std::max(c.pullback.horizons.empty() ? 0.0 : c.pullback.horizons.back(), c.flatten.horizon) -
        (c.pullback.taus.empty() ? 0.0 : 0.0);
    const double needed_min = std::min({c.simulate.t_start, c.energy.t_start, c.continuity.tau, -deepest_pullback - 20.0});
    if (!on_grid(c.noise_t_min, c.noise_dt)) rd.error("noise.t_min", "not a multiple of noise.dt");
    if (!on_grid(c.noise_t_max, c.noise_dt)) rd.error("noise.t_max", "not a multiple of noise.dt");
    if (c.noise_t_min > needed_min) {
        std::ostringstream msg;
        msg << "must be <= " << needed_min << " to cover the configured runs and radius quadrature";
        rd.error("noise.t_min", msg.str());
    }
    if (c.noise_t_max < needed_max) {
        std::ostringstream msg;
        msg << "must be >= " << needed_max;
        rd.error("noise.t_max", msg.str());
    }
    if (s.sigma > 0.0 && s.sigma * std::abs(c.noise_t_min) < 20.0) {
        rd.warn("noise.t_min", "sigma * |t_min| < 20: the stationary start is not yet forgotten at the window edge");
    }
    echo_noise["t_min"] = c.noise_t_min;
    echo_noise["t_max"] = c.noise_t_max;
    echo_noise["dt"] = c.noise_dt;
    echo["noise"] = echo_noise;
    echo["forcing"] = echo_forcing;
    echo["initial"] = echo_initial;

    if (s.noise == NoiseKind::Additive && s.h.n() == s.n && result.errors.empty()) {
        c.aleph = max_sym_grad_norm(s.h);
        c.sigma_threshold = suggest_sigma(c.aleph, s.nu, s.lambda1, c.sigma_floor);
        if (s.sigma < c.sigma_threshold) {
            std::ostringstream msg;
            msg.precision(6);
            msg << "sigma = " << s.sigma << " is below the threshold 36 aleph^2 / (pi nu^2 lambda1^2) = "
                << c.sigma_threshold << " (aleph = " << c.aleph
                << "); the additive absorbing radii are not guaranteed";
            rd.warn("physics.sigma", msg.str());
        }
    }
    if (s.noise == NoiseKind::Additive && c.radii.c_add < 0.0 && result.errors.empty()) {
        c.radii.c_add = additive_constant_default(s);
    }

    echo["radii"] = {{"ds", c.radii.ds},
                     {"j_max", c.radii.j_max},
                     {"truncation_digits", c.radii.truncation_digits},
                     {"C_mult", c.radii.c_mult},
                     {"C_add", c.radii.c_add}};
    echo["sigma_floor"] = c.sigma_floor;
    echo["ou"] = {{"sigma", c.ou.sigma},
                  {"dt", c.ou.dt},
                  {"t_min", c.ou.t_min},
                  {"t_max", c.ou.t_max},
                  {"delta", c.ou.delta},
                  {"decay_time", c.ou.decay_time},
                  {"moment_tolerance", c.ou.moment_tolerance},
                  {"ergodic_bound", c.ou.ergodic_bound},
                  {"decay_bound", c.ou.decay_bound},
                  {"path_stride", c.ou.path_stride}};
    echo["simulate"] = {{"t_start", c.simulate.t_start}, {"t_end", c.simulate.t_end}, {"stride", c.simulate.stride}};
    echo["pullback"] = {{"tau", c.pullback.tau},
                        {"taus", c.pullback.taus},
                        {"horizons", c.pullback.horizons},
                        {"members", c.pullback.members},
                        {"R0", c.pullback.R0},
                        {"stabilization", c.pullback.stabilization},
                        {"ensemble_seed", c.pullback.ensemble_seed}};
    echo["flatten"] = {{"horizon", c.flatten.horizon}, {"lambda_targets", c.flatten.lambda_targets}};
    echo["energy"] = {{"t_start", c.energy.t_start}, {"t_end", c.energy.t_end}, {"c_tol", c.energy.c_tol}};
    echo["continuity"] = {{"amplitudes", c.continuity.amplitudes}, {"tau", c.continuity.tau}, {"T", c.continuity.T}};
    if (s.noise == NoiseKind::Additive) {
        echo["derived"] = {{"aleph", c.aleph}, {"sigma_threshold", c.sigma_threshold}};
    }
    c.echo = echo.dump(2);
    if (result.errors.empty()) result.config = std::move(c);
    return result;
}

ConfigResult validate_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error& e) {
        ConfigResult r;
        r.errors.push_back({"", e.what()});
        return r;
    }
    return validate_config_text(text);
}

}  // namespace snslab
