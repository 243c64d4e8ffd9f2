// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed here;
// the heavy criteria run the standard scenarios from the configs directory
// through the same entry point as the CLI.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "snslab/attractor.hpp"
#include "snslab/config.hpp"
#include "snslab/experiments.hpp"
#include "snslab/radii.hpp"
#include "snslab/solver.hpp"
#include "snslab/spectral_ops.hpp"

using namespace snslab;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kOuMomentLo = 0.475, kOuMomentHi = 0.525, kOuSeconds = 5.0;
constexpr double kErgodicBound = 0.05, kDecayBound = 1e-3;
constexpr double kTrilinearTol = 1e-10, kTrilinearSeconds = 30.0;
constexpr int kTrilinearTriples = 100;
constexpr double kConvolutionTol = 1e-12, kTaylorGreenBTol = 1e-10;
constexpr double kClosedFormTol = 1e-4, kRatioLo = 3.5, kRatioHi = 4.5;
constexpr double kRadiusRelTol = 0.01;
constexpr double kAlephTol = 1e-6, kSigmaTol = 1e-6;
constexpr double kFlattenFactor = 0.1;
constexpr double kCocycleTol = 1e-10;
constexpr double kAutonomyRatio = 0.2, kAutonomySeconds = 600.0;
constexpr double kAutonomySlack = 0.05;  // relative increase tolerated between neighbouring taus
constexpr double kContinuityRatio = 0.75;
constexpr double kTemperedFactor = 10.0;

struct Report {
    int failures = 0;
    void line(int id, bool pass, const std::string& name, const std::string& detail) {
        std::printf("%s %2d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig load(const fs::path& path) {
    auto r = validate_config(path);
    if (!r.ok()) {
        std::string msg = "invalid config " + path.string();
        for (const auto& e : r.errors) msg += "; " + e.path + ": " + e.message;
        throw std::runtime_error(msg);
    }
    return std::move(*r.config);
}

// Rows of a CSV file as name -> column.
std::map<std::string, std::vector<std::string>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    std::vector<std::string> header;
    std::map<std::string, std::vector<std::string>> cols;
    if (!std::getline(in, line)) return cols;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        for (const auto& h : header) {
            if (!std::getline(ss, cell, ',')) cell.clear();
            cols[h].push_back(cell);
        }
    }
    return cols;
}

std::vector<double> numbers(const std::vector<std::string>& col) {
    std::vector<double> out;
    for (const auto& s : col) out.push_back(s.empty() ? std::nan("") : std::stod(s));
    return out;
}

struct Timed {
    RunOutcome outcome;
    double seconds = 0.0;
    fs::path dir;
    double metric(const std::string& k) const {
        const auto it = outcome.metrics.find(k);
        return it == outcome.metrics.end() ? std::nan("") : it->second;
    }
    bool ok() const { return outcome.exit_code == kExitOk; }
    std::string status() const {
        return ok() ? std::string() : fmt(" [exit %d %s: %s]", outcome.exit_code, outcome.error_kind.c_str(),
                                          outcome.message.c_str());
    }
};

Timed run(Command c, const ExperimentConfig& cfg, const fs::path& out_root) {
    Timed t;
    t.dir = out_root / cfg.scenario_id / command_name(c);
    const auto t0 = std::chrono::steady_clock::now();
    t.outcome = run_scenario(c, cfg, t.dir);
    t.seconds = seconds_since(t0);
    std::fprintf(stderr, "  ran %s %s in %.1f s (exit %d)\n", cfg.scenario_id.c_str(), command_name(c).c_str(),
                 t.seconds, t.outcome.exit_code);
    return t;
}

// P[(u.grad) v] at wavevector k by direct summation over p + q = k.
cplx coef(const SpectralField& u, int c, int kx, int ky) {
    const int n = u.n();
    if (std::abs(kx) >= n / 2 || std::abs(ky) >= n / 2) return 0.0;
    if (ky < 0 || (ky == 0 && kx < 0)) return std::conj(coef(u, c, -kx, -ky));
    return u.at(c, kx >= 0 ? kx : kx + n, ky);
}

std::array<cplx, 2> convolution_B(const SpectralField& u, const SpectralField& v, int kx, int ky) {
    const int h = u.n() / 2;
    const cplx I(0.0, 1.0);
    std::array<cplx, 2> w{0.0, 0.0};
    for (int px = -h + 1; px < h; ++px) {
        for (int py = -h + 1; py < h; ++py) {
            const int qx = kx - px, qy = ky - py;
            const cplx adv = coef(u, 0, px, py) * (I * double(qx)) + coef(u, 1, px, py) * (I * double(qy));
            for (int c = 0; c < 2; ++c) w[c] += adv * coef(v, c, qx, qy);
        }
    }
    const double k2 = kx * kx + ky * ky;
    const cplx kw = double(kx) * w[0] + double(ky) * w[1];
    return {w[0] - double(kx) * kw / k2, w[1] - double(ky) * kw / k2};
}

double taylor_green_error(double c, double dt) {
    ScenarioConfig cfg;
    cfg.n = 32;
    cfg.dt = dt;
    cfg.nu = 0.5;
    cfg.sigma = 1.0;
    cfg.forcing = Forcing::zero(32);
    cfg.h = SpectralField(32);
    const auto z = noise::OUPath::constant(c, cfg.sigma, -1.0, 2.0, 1e-3);
    const SpectralField v0 = taylor_green(32);
    const double rate = -2.0 * cfg.nu + cfg.sigma * c;
    double err = 0.0;
    SolveOptions opts;
    opts.record = false;
    opts.observer = [&](double t, const SpectralField& v) {
        const SpectralField exact = std::exp(rate * t) * v0;
        err = std::max(err, norm_H(v - exact) / norm_H(exact));
    };
    solve(cfg, v0, 0.0, 1.0, z, opts);
    return err;
}

void criteria_ou(Report& rep, const ExperimentConfig& cfg, const fs::path& out) {
    const Timed t = run(Command::OuVerify, cfg, out);
    const double m = t.metric("second_moment");
    rep.line(1, t.ok() && m >= kOuMomentLo && m <= kOuMomentHi && t.seconds < kOuSeconds, "OU second moment",
             fmt("E|z|^2 = %.5f in [%.3f, %.3f] over %.0f steps, %.2f s < %.0f s%s", m, kOuMomentLo, kOuMomentHi,
                 t.metric("steps"), t.seconds, kOuSeconds, t.status().c_str()));
    const double avg = t.metric("ergodic_average");
    const double dec = t.metric("backward_decay");
    rep.line(2, t.ok() && std::abs(avg) <= kErgodicBound && dec <= kDecayBound, "OU ergodicity and backward decay",
             fmt("|average at t=1e4| = %.3g <= %.2g, e^{-0.1 t}|z(-t)| at t=100 = %.3g <= %.0e", std::abs(avg),
                 kErgodicBound, dec, kDecayBound));
}

void criterion_trilinear(Report& rep) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_zero = 0.0, worst_anti = 0.0;
    for (int i = 0; i < kTrilinearTriples; ++i) {
        const SpectralField u = random_field(32, 1234, 3 * i, 1.0);
        const SpectralField v = random_field(32, 1234, 3 * i + 1, 1.0);
        const SpectralField w = random_field(32, 1234, 3 * i + 2, 1.0);
        worst_zero = std::max(worst_zero, std::abs(trilinear_b(u, v, v)) / (norm_V(u) * norm_V_sq(v)));
        worst_anti = std::max(worst_anti,
                              std::abs(trilinear_b(u, v, w) + trilinear_b(u, w, v)) / (norm_V(u) * norm_V(v) * norm_V(w)));
    }
    const double secs = seconds_since(t0);
    rep.line(3, worst_zero <= kTrilinearTol && worst_anti <= kTrilinearTol && secs < kTrilinearSeconds,
             "trilinear identities",
             fmt("max |b(u,v,v)|/(|u|_V|v|_V^2) = %.2e, max antisymmetry defect = %.2e (<= %.0e), %d triples, %.2f s",
                 worst_zero, worst_anti, kTrilinearTol, kTrilinearTriples, secs));
}

void criterion_convolution(Report& rep) {
    const int n = 8, K = dealias_cutoff(n);
    double err = 0.0, scale = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const SpectralField u = random_field(n, 808, 2 * trial, 1.0);
        const SpectralField v = random_field(n, 808, 2 * trial + 1, 1.0);
        const SpectralField b = nonlinear_B(u, v);
        for (int ix = 0; ix < n; ++ix) {
            for (int iky = 0; iky <= K; ++iky) {
                const int kx = b.kx(ix);
                if (std::abs(kx) > K || (kx == 0 && iky == 0)) continue;
                const auto ref = convolution_B(u, v, kx, iky);
                for (int c = 0; c < 2; ++c) {
                    err = std::max(err, std::abs(b.at(c, ix, iky) - ref[c]));
                    scale = std::max(scale, std::abs(ref[c]));
                }
            }
        }
    }
    const double tg = norm_H(nonlinear_B(taylor_green(32)));
    rep.line(4, err / scale <= kConvolutionTol && tg <= kTaylorGreenBTol, "nonlinearity oracle",
             fmt("relative error vs convolution at N=8 = %.2e <= %.0e, |B(TG,TG)|_H = %.2e <= %.0e", err / scale,
                 kConvolutionTol, tg, kTaylorGreenBTol));
}

void criterion_closed_form(Report& rep) {
    const double c = 1.0;
    const double e1 = taylor_green_error(c, 1e-3);
    const double e2 = taylor_green_error(c, 5e-4);
    const double ratio = e1 / e2;
    rep.line(5, e1 <= kClosedFormTol && ratio >= kRatioLo && ratio <= kRatioHi, "closed-form dynamics",
             fmt("Taylor-Green with z == %.1f: relative error %.3e <= %.0e at dt=1e-3, halving ratio %.3f in [%.1f, %.1f]",
                 c, e1, kClosedFormTol, ratio, kRatioLo, kRatioHi));
}

void criterion_energy(Report& rep, const ExperimentConfig& cfg, const fs::path& out) {
    const Timed t = run(Command::EnergyCheck, cfg, out);
    rep.line(6, t.ok() && t.metric("violations") == 0.0, "energy inequality",
             fmt("max residual %.4g <= tolerance %.4g (= %.2g * dt * scale %.4g), %.0f violations%s",
                 t.metric("max_residual"), t.metric("tolerance"), cfg.energy.c_tol, t.metric("scale"),
                 t.metric("violations"), t.status().c_str()));
}

bool absorbing_ok(const Timed& t, int* absorbed_rows) {
    if (!t.ok()) return false;
    const auto abs = read_csv(t.dir / "absorbing.csv");
    *absorbed_rows = 0;
    for (const auto& a : abs.at("absorbed")) *absorbed_rows += a == "1";
    return t.metric("absorbing_holds") == 1.0 && *absorbed_rows > 0;
}

void criterion_radii(Report& rep, const Timed& pb) {
    const auto z0 = noise::OUPath::constant(0.0, 1.0, -200.0, 2.0, 0.01);
    const SpectralField f0 = sin_pair(32, 2, 1.0);
    const double nu = 0.5, c = norm_H_sq(f0);
    const auto r0 = radii_multiplicative(0.0, z0, Forcing::zero(32), nu, 1.0, 1.0);
    const double k_const = mult_K(0.0, z0, Forcing::constant(f0), nu, 1.0, 1.0).value;
    const double k_exact = c / nu;
    const bool closed = r0.K == 0.0 && r0.radius_H == 1.0 && std::abs(k_const - k_exact) <= kRadiusRelTol * k_exact;
    int absorbed = 0;
    const bool traj = absorbing_ok(pb, &absorbed);
    rep.line(7, closed && traj, "absorbing radii",
             fmt("f=0: K=%g radius=%g; constant f: K=%.6g vs %.6g; standard run: %d absorbed horizons (t >= %.2f) "
                 "within |v|_H^2 <= %.4g and log10 |v|_V^2 <= %.4g: %s%s",
                 r0.K, r0.radius_H, k_const, k_exact, absorbed, pb.metric("absorption_time"), pb.metric("radius_H"),
                 pb.metric("radius_V_log10"), traj ? "yes" : "no", pb.status().c_str()));
}

void criterion_additive(Report& rep, const ExperimentConfig& cfg, const Timed& pb) {
    const double aleph = estimate_aleph(taylor_green(32)).aleph;
    const double s = suggest_sigma(1.0, 1.0, 1.0);
    const bool above = cfg.scenario.sigma >= cfg.sigma_threshold;
    int absorbed = 0;
    const bool traj = absorbing_ok(pb, &absorbed);
    rep.line(8, std::abs(aleph - 1.0) <= kAlephTol && std::abs(s - 36.0 / std::numbers::pi) <= kSigmaTol && above && traj,
             "additive theory",
             fmt("aleph(TG) = %.9f, suggest_sigma(1,1,1) = %.9f, sigma %.4g >= threshold %.4g; %d absorbed horizons "
                 "within |u|_H^2 <= %.4g and log10 |u|_V^2 <= %.4g: %s%s",
                 aleph, s, cfg.scenario.sigma, cfg.sigma_threshold, absorbed, pb.metric("radius_H"),
                 pb.metric("radius_V_log10"), traj ? "yes" : "no", pb.status().c_str()));
}

void criterion_flatten(Report& rep, const std::vector<Timed>& runs) {
    bool pass = true;
    std::string detail;
    for (const auto& t : runs) {
        const double t10 = t.metric("tail_at_10"), t100 = t.metric("tail_at_100");
        const bool ok = t.ok() && t.metric("absorbed") == 1.0 && t.metric("nonincreasing") == 1.0 &&
                        t100 <= kFlattenFactor * t10;
        pass = pass && ok;
        detail += fmt("%s%s: tail(100)/tail(10) = %.3g <= %.2g, nonincreasing %s, absorbed %s%s",
                      detail.empty() ? "" : "; ", t.dir.parent_path().filename().string().c_str(), t100 / t10,
                      kFlattenFactor, t.metric("nonincreasing") == 1.0 ? "yes" : "no",
                      t.metric("absorbed") == 1.0 ? "yes" : "no", t.status().c_str());
    }
    rep.line(9, pass, "flattening", detail);
}

void criterion_cocycle(Report& rep, const ExperimentConfig& c) {
    // The cocycle reads z_omega on [0, s + t], so the legs must fit inside the path's forward window.
    const auto z = config_ou(c);
    const double tau = -6.0, s = 0.8, t = 1.2;
    const SpectralField v0 = u_to_v(c.initial, z.at(0.0), c.scenario);
    const SpectralField once = cocycle(c.scenario, s + t, tau, z, v0);
    const SpectralField two = cocycle(c.scenario, t, tau + s, z.relabeled(s), cocycle(c.scenario, s, tau, z, v0));
    const double rel = std::abs(norm_H(once) - norm_H(two)) / norm_H(once);
    rep.line(10, rel <= kCocycleTol, "cocycle property",
             fmt("one shot vs two legs over [%.1f, %.1f]: relative norm_H difference %.2e <= %.0e", tau, tau + s + t,
                 rel, kCocycleTol));
}

struct AutonomyCheck {
    bool pass = false;
    std::string detail;
};

AutonomyCheck check_autonomy(const Timed& t) {
    AutonomyCheck out;
    if (!t.ok()) {
        out.detail = t.dir.parent_path().filename().string() + t.status();
        return out;
    }
    const auto csv = read_csv(t.dir / "autonomy.csv");
    const auto dh = numbers(csv.at("dist_H"));
    const auto dv = numbers(csv.at("dist_V"));
    // "Ensemble noise" is the stabilization threshold of the approximations.
    const auto log = read_csv(t.dir / "autonomy_pullback.csv");
    const double thr = numbers(log.at("threshold")).back();
    bool mono = true;
    for (std::size_t k = 1; k < dh.size(); ++k) {
        mono = mono && dh[k] <= dh[k - 1] * (1.0 + kAutonomySlack) + 2.0 * thr;
        mono = mono && dv[k] <= dv[k - 1] * (1.0 + kAutonomySlack) + 2.0 * thr;
    }
    const double rh = dh.back() / dh.front(), rv = dv.back() / dv.front();
    out.pass = mono && rh <= kAutonomyRatio && rv <= kAutonomyRatio && t.seconds < kAutonomySeconds;
    out.detail = fmt("%s: ratio_H %.3g, ratio_V %.3g (<= %.1f), nonincreasing %s, %.0f s < %.0f s",
                     t.dir.parent_path().filename().string().c_str(), rh, rv, kAutonomyRatio, mono ? "yes" : "no",
                     t.seconds, kAutonomySeconds);
    return out;
}

void criterion_continuity(Report& rep, const Timed& t) {
    std::string rows;
    if (t.ok()) {
        const auto csv = read_csv(t.dir / "continuity.csv");
        for (const auto& d : csv.at("deviation")) rows += (rows.empty() ? "" : ", ") + d.substr(0, 8);
    }
    rep.line(12, t.ok() && t.metric("decreasing") == 1.0 && t.metric("max_ratio") <= kContinuityRatio,
             "noise continuity",
             fmt("deviations [%s] along eps 0.4..0.05, worst halving ratio %.3f <= %.2f%s", rows.c_str(),
                 t.metric("max_ratio"), kContinuityRatio, t.status().c_str()));
}

void criterion_tempered(Report& rep, const Timed& pb) {
    const double r = pb.metric("tempered_ratio_10_40");
    rep.line(13, std::isfinite(r) && r <= 1.0 / kTemperedFactor, "tempered decay",
             fmt("e^{-(nu l1/3) t} K(-1, theta_{-t} w): value(40)/value(10) = %.3g <= %.2g", r, 1.0 / kTemperedFactor));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria of the laboratory"};
    std::string configs = "configs", out = "acceptance_runs";
    app.add_option("--configs", configs, "Directory with the standard scenario files")->check(CLI::ExistingDirectory);
    app.add_option("--out", out, "Root directory for run outputs");
    CLI11_PARSE(app, argc, argv);

    Report rep;
    try {
        const fs::path cdir(configs), odir(out);
        const ExperimentConfig ou = load(cdir / "ou_verify.json");
        const ExperimentConfig mult = load(cdir / "multiplicative.json");
        const ExperimentConfig add = load(cdir / "additive.json");

        criteria_ou(rep, ou, odir);
        criterion_trilinear(rep);
        criterion_convolution(rep);
        criterion_closed_form(rep);
        criterion_energy(rep, mult, odir);

        const Timed pb_mult = run(Command::Pullback, mult, odir);
        criterion_radii(rep, pb_mult);
        const Timed pb_add = run(Command::Pullback, add, odir);
        criterion_additive(rep, add, pb_add);

        criterion_flatten(rep, {run(Command::Flatten, mult, odir), run(Command::Flatten, add, odir)});
        criterion_cocycle(rep, mult);

        const AutonomyCheck am = check_autonomy(run(Command::Autonomy, mult, odir));
        const AutonomyCheck aa = check_autonomy(run(Command::Autonomy, add, odir));
        rep.line(11, am.pass && aa.pass, "asymptotic autonomy", am.detail + "; " + aa.detail);

        criterion_continuity(rep, run(Command::Continuity, mult, odir));
        criterion_tempered(rep, pb_mult);
    } catch (const std::exception& e) {
        std::printf("FAIL acceptance aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%d criteria failed\n", rep.failures);
    return rep.failures == 0 ? 0 : 1;
}
