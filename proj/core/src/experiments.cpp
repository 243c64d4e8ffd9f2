#include "snslab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"
#include "snslab/attractor.hpp"
#include "snslab/errors.hpp"
#include "snslab/io.hpp"
#include "snslab/radii.hpp"
#include "snslab/spectral_ops.hpp"

namespace snslab {
namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

const std::vector<std::pair<Command, std::string>>& command_table() {
    static const std::vector<std::pair<Command, std::string>> table{
        {Command::OuVerify, "ou-verify"},   {Command::Simulate, "simulate"},
        {Command::Pullback, "pullback"},    {Command::Autonomy, "autonomy"},
        {Command::Flatten, "flatten"},      {Command::EnergyCheck, "energy-check"},
        {Command::Continuity, "continuity"},
    };
    return table;
}

// Small CSV builder; every number goes through format_double so reruns are byte-identical.
class Csv {
public:
    explicit Csv(std::initializer_list<std::string> header) {
        bool first = true;
        for (const auto& h : header) {
            if (!first) os_ << ',';
            os_ << h;
            first = false;
        }
        os_ << '\n';
    }
    Csv& num(double x) { return cell(format_double(x)); }
    Csv& str(const std::string& s) { return cell(s); }
    Csv& flag(bool b) { return cell(b ? "1" : "0"); }
    void end() {
        os_ << '\n';
        fresh_ = true;
    }
    std::string text() const { return os_.str(); }

private:
    Csv& cell(const std::string& s) {
        if (!fresh_) os_ << ',';
        os_ << s;
        fresh_ = false;
        return *this;
    }
    std::ostringstream os_;
    bool fresh_ = true;
};

class Run {
public:
    Run(const ExperimentConfig& c, fs::path dir) : config(c), cfg(c.scenario), out_dir(std::move(dir)) {}

    void write(const std::string& name, const std::string& contents) {
        write_text_file(out_dir / name, contents);
        files.push_back(name);
    }
    void metric(const std::string& key, double value) { outcome.metrics[key] = value; }

    const ExperimentConfig& config;
    ScenarioConfig cfg;
    fs::path out_dir;
    RunOutcome outcome;
    std::vector<std::string> files;
};

std::string log_csv(LogValue v) { return std::isfinite(v.value()) ? format_double(v.value()) : v.str(); }

struct RadiiAt {
    double radius_H = 0.0;   // squared-norm bound at the H level
    LogValue radius_V;       // squared-norm bound at the V level
    MultRadii mult;
    AddRadii add;
};

AdditiveParams additive_params(const ExperimentConfig& c) {
    const ScenarioConfig& s = c.scenario;
    AdditiveParams p;
    p.nu = s.nu;
    p.sigma = s.sigma;
    p.lambda1 = s.lambda1;
    p.aleph = c.aleph;
    p.h_norm_H_sq = norm_H_sq(s.h);
    p.h_norm_V_sq = norm_V_sq(s.h);
    p.default_C = additive_constant_default(s);
    return p;
}

RadiiAt radii_at(const ExperimentConfig& c, double tau, const noise::OUPath& z) {
    const ScenarioConfig& s = c.scenario;
    RadiiAt r;
    if (s.noise == NoiseKind::Multiplicative) {
        r.mult = radii_multiplicative(tau, z, s.forcing, s.nu, s.sigma, s.lambda1, c.radii);
        r.radius_H = r.mult.radius_H;
        r.radius_V = r.mult.K_hat;
    } else {
        r.add = radii_additive(tau, z, s.forcing, additive_params(c), c.radii);
        r.radius_H = r.add.R_H;
        r.radius_V = r.add.R_V;
    }
    return r;
}

PullbackSpec pullback_spec(const ExperimentConfig& c, double R0) {
    PullbackSpec spec;
    spec.tau = c.pullback.tau;
    spec.horizons = c.pullback.horizons;
    spec.R0 = R0;
    spec.members = c.pullback.members;
    spec.seed = c.pullback.ensemble_seed;
    spec.threads = c.threads;
    spec.stabilization = c.pullback.stabilization;
    return spec;
}

// Initial ball radius (an H norm in the u variable): configured, or twice the
// absorbing radius at tau = pullback.tau.
double ball_radius(const ExperimentConfig& c, const noise::OUPath& z) {
    if (c.pullback.R0 > 0.0) return c.pullback.R0;
    return 2.0 * std::sqrt(radii_at(c, c.pullback.tau, z).radius_H);
}

double absorption_time(const ExperimentConfig& c, const noise::OUPath& z, double R0, double t_max) {
    const ScenarioConfig& s = c.scenario;
    return s.noise == NoiseKind::Multiplicative
               ? absorption_time_mult(z, s.nu, s.sigma, s.lambda1, R0 * R0, t_max)
               : absorption_time_add(z, s.nu, c.aleph, s.lambda1, R0 * R0, t_max);
}

void write_pullback_log(Run& run, const std::string& name, const AttractorApprox& a) {
    Csv csv{"t", "consecutive_dist_H", "consecutive_dist_V", "diameter_H", "threshold"};
    for (std::size_t k = 0; k < a.images.size(); ++k) {
        csv.num(a.images[k].horizon);
        if (k == 0) {
            csv.str("").str("");
        } else {
            csv.num(a.consecutive_H[k - 1]).num(a.consecutive_V[k - 1]);
        }
        csv.num(diameter(a.images[k].members, Norm::H)).num(a.threshold);
        csv.end();
    }
    run.write(name, csv.text());
}

void cmd_ou_verify(Run& run) {
    const OuVerifySettings& o = run.config.ou;
    const auto w = noise::sample_wiener(run.config.seed, o.t_min, o.t_max, o.dt);
    const auto z = noise::ou_from_wiener(w, o.sigma);
    const auto rep = noise::ou_property_report(z, o.delta, o.decay_time);

    const double target = rep.second_moment_target;
    const double moment_err = std::abs(rep.second_moment - target) / target;
    Csv csv{"quantity", "value", "target", "bound", "pass"};
    csv.str("second_moment").num(rep.second_moment).num(target).num(o.moment_tolerance).flag(moment_err <= o.moment_tolerance);
    csv.end();
    csv.str("ergodic_average").num(rep.ergodic_average).num(0.0).num(o.ergodic_bound)
        .flag(std::abs(rep.ergodic_average) <= o.ergodic_bound);
    csv.end();
    csv.str("backward_decay").num(rep.backward_decay).num(0.0).num(o.decay_bound).flag(rep.backward_decay <= o.decay_bound);
    csv.end();
    csv.str("max_growth_ratio").num(rep.max_growth_ratio).str("").str("").str("");
    csv.end();
    csv.str("horizon").num(rep.horizon).num(100.0 / o.sigma).str("").flag(rep.horizon_ok);
    csv.end();
    csv.str("steps").num(static_cast<double>(z.size() - 1)).str("").str("").str("");
    csv.end();
    run.write("ou_report.csv", csv.text());

    Csv path{"t", "W", "z"};
    const auto wv = w.values();
    const auto zv = z.values();
    for (std::size_t i = 0; i < zv.size(); i += static_cast<std::size_t>(o.path_stride)) {
        path.num(w.time_at(w.first_index() + static_cast<std::int64_t>(i))).num(wv[i]).num(zv[i]);
        path.end();
    }
    run.write("ou_path.csv", path.text());

    run.metric("second_moment", rep.second_moment);
    run.metric("second_moment_relative_error", moment_err);
    run.metric("ergodic_average", rep.ergodic_average);
    run.metric("backward_decay", rep.backward_decay);
    run.metric("max_growth_ratio", rep.max_growth_ratio);
    run.metric("steps", static_cast<double>(z.size() - 1));
}

void cmd_simulate(Run& run) {
    const auto& sim = run.config.simulate;
    const auto z = config_ou(run.config);
    const double z0 = z.at(sim.t_start);
    const SpectralField v0 = u_to_v(run.config.initial, z0, run.cfg);
    run.cfg.blowup_reference = std::max(1.0, norm_H_sq(v0));
    SolveOptions opts;
    opts.stride = sim.stride;
    SolveResult r = solve(run.cfg, v0, sim.t_start, sim.t_end, z, opts);
    if (run.cfg.noise == NoiseKind::Multiplicative && sim.stride == 1 && r.record.size() >= 3) {
        r.record.energy_residual = energy_residual(r.record, {run.cfg.nu, run.cfg.sigma, run.cfg.lambda1});
    }
    std::ostringstream traj;
    write_trajectory_csv(traj, r.record);
    run.write("trajectory.csv", traj.str());

    const SpectralField u_end = v_to_u(r.final_state, z.at(sim.t_end), run.cfg);
    write_field_snapshot(run.out_dir / "final_field.csv", run.out_dir / "final_field.json", u_end, sim.t_end,
                         run.config.scenario_id);
    run.files.push_back("final_field.csv");
    run.files.push_back("final_field.json");

    run.metric("initial_norm_H", norm_H(v0));
    run.metric("final_norm_H", norm_H(r.final_state));
    run.metric("final_norm_V", norm_V(r.final_state));
    run.metric("final_norm_H_u", norm_H(u_end));
    run.metric("steps", std::round((sim.t_end - sim.t_start) / run.cfg.dt));
}

void cmd_pullback(Run& run) {
    const ExperimentConfig& c = run.config;
    const auto z = config_ou(c);
    const double R0 = ball_radius(c, z);
    run.metric("R0", R0);
    run.cfg.blowup_reference = std::max(1.0, R0 * R0 * std::exp(2.0 * std::abs(z.at(-c.pullback.horizons.back()))));
    const PullbackSpec spec = pullback_spec(c, R0);
    const AttractorApprox approx = evolve_pullback(run.cfg, spec, z);
    write_pullback_log(run, "pullback.csv", approx);

    // Radii on the tau grid (plus the pullback tau itself).
    std::set<double, std::greater<>> taus(c.pullback.taus.begin(), c.pullback.taus.end());
    taus.insert(c.pullback.tau);
    Csv radii{"tau", "K", "K_tilde", "K_hat", "K_hat1", "rho1", "rho2", "R_H", "R_V", "R_V_log10", "L", "tail_ok"};
    for (double tau : taus) {
        const RadiiAt r = radii_at(c, tau, z);
        radii.num(tau);
        if (run.cfg.noise == NoiseKind::Multiplicative) {
            radii.num(r.mult.K).num(r.mult.K_tilde).str(log_csv(r.mult.K_hat)).str(log_csv(r.mult.K_hat1)).str("").str("");
            radii.num(r.mult.radius_H).str(log_csv(r.mult.K_hat)).num(r.mult.K_hat.log10).num(r.mult.L).flag(r.mult.tail_ok);
        } else {
            radii.str("").str("").str("").str("").num(r.add.rho1).num(r.add.rho2);
            radii.num(r.add.R_H).str(log_csv(r.add.R_V)).num(r.add.R_V.log10).num(r.add.L).flag(r.add.tail_ok);
        }
        radii.end();
    }
    run.write("radii.csv", radii.text());

    // Absorbing check: image norms against the radii at tau, for every horizon past
    // the absorption time of the initial ball.
    const RadiiAt r = radii_at(c, c.pullback.tau, z);
    const double T_abs = absorption_time(c, z, R0, c.pullback.horizons.back());
    const bool mult = run.cfg.noise == NoiseKind::Multiplicative;
    Csv abs{"t", "absorbed", "max_sq_norm_H", "bound_H", "max_sq_norm_V", "bound_V", "holds_H", "holds_V"};
    bool all_hold = true;
    for (const Ensemble& e : approx.images) {
        double mh = 0.0, mv = 0.0;
        const auto& set = mult ? e.v_members : e.members;
        for (const auto& f : set) {
            mh = std::max(mh, norm_H_sq(f));
            mv = std::max(mv, norm_V_sq(f));
        }
        const bool absorbed = e.horizon >= T_abs;
        const bool hold_H = mh <= r.radius_H;
        const bool hold_V = mv > 0.0 ? std::log10(mv) <= r.radius_V.log10 : true;
        if (absorbed) all_hold = all_hold && hold_H && hold_V;
        abs.num(e.horizon).flag(absorbed).num(mh).num(r.radius_H).num(mv).str(log_csv(r.radius_V)).flag(hold_H).flag(hold_V);
        abs.end();
    }
    run.write("absorbing.csv", abs.text());

    if (mult) {
        const std::vector<double> ts{10.0, 20.0, 30.0, 40.0};
        const auto decay = tempered_decay(z, run.cfg.forcing, run.cfg.nu, run.cfg.sigma, run.cfg.lambda1, ts, c.radii);
        Csv tc{"t", "tempered_K"};
        for (std::size_t i = 0; i < ts.size(); ++i) {
            tc.num(ts[i]).num(decay[i]);
            tc.end();
        }
        run.write("tempered.csv", tc.text());
        run.metric("tempered_ratio_10_40", decay.back() / decay.front());
    }

    run.metric("absorption_time", T_abs);
    run.metric("radius_H", r.radius_H);
    run.metric("radius_V_log10", r.radius_V.log10);
    run.metric("absorbing_holds", all_hold ? 1.0 : 0.0);
    run.metric("final_consecutive_H", approx.consecutive_H.empty() ? 0.0 : approx.consecutive_H.back());
    run.metric("threshold", approx.threshold);
    run.metric("converged", approx.converged ? 1.0 : 0.0);
    if (!approx.converged) throw Unconverged("pullback: consecutive images did not stabilize below the threshold");
}

void cmd_autonomy(Run& run) {
    const ExperimentConfig& c = run.config;
    const auto z = config_ou(c);
    const double R0 = ball_radius(c, z);
    run.metric("R0", R0);
    run.cfg.blowup_reference = std::max(1.0, R0 * R0 * std::exp(2.0 * std::abs(z.at(-c.pullback.horizons.back()))));
    const PullbackSpec spec = pullback_spec(c, R0);
    std::vector<double> taus = c.pullback.taus;
    std::sort(taus.begin(), taus.end(), std::greater<>());

    AutonomyResult res;
    try {
        res = autonomy_curve(run.cfg, taus, spec, z);
    } catch (const Unconverged&) {
        run.metric("autonomous_converged", 0.0);
        throw;
    }
    write_pullback_log(run, "autonomy_pullback.csv", res.autonomous);
    Csv csv{"tau", "dist_H", "dist_V", "tail", "converged"};
    bool all_converged = true;
    for (const auto& row : res.rows) {
        csv.num(row.tau).num(row.dist_H).num(row.dist_V).num(row.tail).flag(row.converged);
        csv.end();
        all_converged = all_converged && row.converged;
    }
    run.write("autonomy.csv", csv.text());
    run.metric("autonomous_converged", 1.0);
    run.metric("all_converged", all_converged ? 1.0 : 0.0);
    if (!res.rows.empty() && res.rows.front().dist_H > 0.0) {
        run.metric("ratio_H", res.rows.back().dist_H / res.rows.front().dist_H);
        run.metric("ratio_V", res.rows.back().dist_V / res.rows.front().dist_V);
    }
    if (!all_converged) throw Unconverged("autonomy: a non-autonomous attractor approximation did not stabilize");
}

void cmd_flatten(Run& run) {
    const ExperimentConfig& c = run.config;
    const auto z = config_ou(c);
    const double R0 = ball_radius(c, z);
    run.metric("R0", R0);
    run.cfg.blowup_reference = std::max(1.0, R0 * R0 * std::exp(2.0 * std::abs(z.at(-c.flatten.horizon))));
    PullbackSpec spec = pullback_spec(c, R0);
    spec.horizons = {c.flatten.horizon};
    const AttractorApprox approx = evolve_pullback(run.cfg, spec, z);

    const EigenOrdering ord(run.cfg.n);
    std::set<int> idx;
    for (double target : c.flatten.lambda_targets) idx.insert(ord.index_before_lambda(target));
    const std::vector<int> i_list(idx.begin(), idx.end());
    const auto rows = flattening_profile(approx.final_image().v_members, i_list, ord);
    Csv csv{"i", "lambda_next", "tail_V", "t"};
    bool nonincreasing = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        csv.num(rows[k].i).num(rows[k].lambda_next).num(rows[k].tail_V).num(c.flatten.horizon);
        csv.end();
        if (k > 0 && rows[k].tail_V > rows[k - 1].tail_V) nonincreasing = false;
    }
    run.write("flattening.csv", csv.text());
    const double T_abs = absorption_time(c, z, R0, c.flatten.horizon);
    run.metric("absorption_time", T_abs);
    run.metric("absorbed", c.flatten.horizon >= T_abs ? 1.0 : 0.0);
    run.metric("nonincreasing", nonincreasing ? 1.0 : 0.0);
    const auto tail_near = [&](double target) {
        const int i = ord.index_before_lambda(target);
        for (const auto& row : rows) {
            if (row.i == i) return row.tail_V;
        }
        return std::nan("");
    };
    run.metric("tail_at_10", tail_near(10.0));
    run.metric("tail_at_100", tail_near(100.0));
}

void cmd_energy(Run& run) {
    if (run.cfg.noise != NoiseKind::Multiplicative) {
        throw ValidationError("energy-check: the energy inequality is implemented for multiplicative noise");
    }
    const auto& en = run.config.energy;
    const auto z = config_ou(run.config);
    const SpectralField v0 = u_to_v(run.config.initial, z.at(en.t_start), run.cfg);
    run.cfg.blowup_reference = std::max(1.0, norm_H_sq(v0));
    SolveResult r = solve(run.cfg, v0, en.t_start, en.t_end, z);
    const EnergyParams p{run.cfg.nu, run.cfg.sigma, run.cfg.lambda1};
    r.record.energy_residual = energy_residual(r.record, p);
    const double scale = energy_scale(r.record, p);
    const double tol = en.c_tol * run.cfg.dt * scale;
    Csv csv{"t", "residual", "tolerance"};
    double worst = -std::numeric_limits<double>::infinity();
    int violations = 0;
    for (std::size_t i = 0; i < r.record.size(); ++i) {
        const double res = r.record.energy_residual[i];
        csv.num(r.record.t[i]).num(res).num(tol);
        csv.end();
        worst = std::max(worst, res);
        if (res > tol) ++violations;
    }
    run.write("energy.csv", csv.text());
    run.metric("max_residual", worst);
    run.metric("tolerance", tol);
    run.metric("scale", scale);
    run.metric("violations", violations);
}

void cmd_continuity(Run& run) {
    const ExperimentConfig& c = run.config;
    const auto w = config_wiener(c);
    const auto z = config_ou(c);
    const SpectralField v0 = u_to_v(c.initial, z.at(c.continuity.tau), run.cfg);
    run.cfg.blowup_reference = std::max(1.0, norm_H_sq(v0));
    const auto rows = noise_continuity_test(run.cfg, w, c.continuity.amplitudes, c.continuity.tau, c.continuity.T, v0);
    Csv csv{"epsilon", "path_distance", "deviation", "ratio_to_previous"};
    double worst_ratio = 0.0;
    bool decreasing = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        csv.num(rows[k].epsilon).num(rows[k].path_distance).num(rows[k].deviation);
        if (k == 0) {
            csv.str("");
        } else {
            const double ratio = rows[k].deviation / rows[k - 1].deviation;
            csv.num(ratio);
            worst_ratio = std::max(worst_ratio, ratio);
            decreasing = decreasing && rows[k].deviation < rows[k - 1].deviation;
        }
        csv.end();
    }
    run.write("continuity.csv", csv.text());
    run.metric("max_ratio", worst_ratio);
    run.metric("decreasing", decreasing ? 1.0 : 0.0);
}

void write_manifest(Run& run, Command command, double seconds) {
    ojson m;
    m["scenario_id"] = run.config.scenario_id;
    m["command"] = command_name(command);
    m["version"] = library_version();
    ojson echo = ojson::parse(run.config.echo.empty() ? "{}" : run.config.echo);
    echo["seed"] = run.config.seed;
    echo["threads"] = run.config.threads;
    m["config"] = echo;
    m["seeds"] = {{"noise", run.config.seed}, {"ensemble", run.config.pullback.ensemble_seed}};
    m["grid"] = {{"N", run.cfg.n}, {"dt", run.cfg.dt}, {"noise_dt", run.config.noise_dt}};
    m["quadrature"] = {{"ds", run.config.radii.ds},
                       {"j_max", run.config.radii.j_max},
                       {"truncation_digits", run.config.radii.truncation_digits},
                       {"C_mult", run.config.radii.c_mult},
                       {"C_add", run.config.radii.c_add}};
    m["wall_clock_seconds"] = seconds;
    m["exit_code"] = run.outcome.exit_code;
    if (!run.outcome.error_kind.empty()) {
        m["error"] = {{"kind", run.outcome.error_kind}, {"message", run.outcome.message}};
    }
    ojson metrics = ojson::object();
    for (const auto& [k, v] : run.outcome.metrics) metrics[k] = std::isfinite(v) ? ojson(v) : ojson(nullptr);
    m["metrics"] = metrics;
    ojson outputs = ojson::array();
    for (const auto& f : run.outcome.outputs) outputs.push_back({{"file", f.name}, {"sha256", f.sha256}});
    m["outputs"] = outputs;
    write_text_file(run.out_dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
    for (const auto& [c, n] : command_table()) {
        if (n == name) return c;
    }
    return std::nullopt;
}

std::string command_name(Command c) {
    for (const auto& [cc, n] : command_table()) {
        if (cc == c) return n;
    }
    return "unknown";
}

std::vector<std::string> command_names() {
    std::vector<std::string> out;
    for (const auto& entry : command_table()) out.push_back(entry.second);
    return out;
}

std::string library_version() { return "0.1.0"; }

noise::WienerPath config_wiener(const ExperimentConfig& c) {
    return noise::sample_wiener(c.seed, c.noise_t_min, c.noise_t_max, c.noise_dt);
}

noise::OUPath config_ou(const ExperimentConfig& c) {
    if (c.constant_z) {
        return noise::OUPath::constant(*c.constant_z, c.scenario.sigma, c.noise_t_min, c.noise_t_max, c.noise_dt);
    }
    return noise::ou_from_wiener(config_wiener(c), c.scenario.sigma);
}

RunOutcome run_scenario(Command command, const ExperimentConfig& config, const fs::path& out_dir) {
    const auto started = std::chrono::steady_clock::now();
    Run run(config, out_dir);
    try {
        fs::create_directories(out_dir);
    } catch (const fs::filesystem_error& e) {
        run.outcome.exit_code = kExitValidation;
        run.outcome.error_kind = "validation";
        run.outcome.message = e.what();
        return run.outcome;
    }
    try {
        switch (command) {
            case Command::OuVerify: cmd_ou_verify(run); break;
            case Command::Simulate: cmd_simulate(run); break;
            case Command::Pullback: cmd_pullback(run); break;
            case Command::Autonomy: cmd_autonomy(run); break;
            case Command::Flatten: cmd_flatten(run); break;
            case Command::EnergyCheck: cmd_energy(run); break;
            case Command::Continuity: cmd_continuity(run); break;
        }
    } catch (const Unconverged& e) {
        run.outcome.exit_code = kExitUnconverged;
        run.outcome.error_kind = "unconverged";
        run.outcome.message = e.what();
    } catch (const NumericalAbort& e) {
        run.outcome.exit_code = kExitNumerical;
        run.outcome.error_kind = "numerical_abort";
        run.outcome.message = e.what();
    } catch (const PathCoverageError& e) {
        run.outcome.exit_code = kExitValidation;
        run.outcome.error_kind = "path_coverage";
        run.outcome.message = e.what();
    } catch (const Error& e) {
        run.outcome.exit_code = kExitValidation;
        run.outcome.error_kind = "validation";
        run.outcome.message = e.what();
    }

    if (!run.outcome.metrics.empty()) {
        Csv summary{"quantity", "value"};
        for (const auto& [k, v] : run.outcome.metrics) {
            summary.str(k).num(v);
            summary.end();
        }
        run.write("summary.csv", summary.text());
    }
    if (run.outcome.exit_code != kExitOk) {
        ojson err = {{"error", run.outcome.error_kind},
                     {"message", run.outcome.message},
                     {"exit_code", run.outcome.exit_code},
                     {"command", command_name(command)}};
        run.write("error.json", err.dump(2) + "\n");
    }
    for (const auto& name : run.files) run.outcome.outputs.push_back({name, sha256_file(out_dir / name)});
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_manifest(run, command, seconds);
    return run.outcome;
}

}  // namespace snslab
