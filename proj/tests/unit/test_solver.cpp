#include <cmath>
#include <vector>

#include "doctest.h"
#include "snslab/errors.hpp"
#include "snslab/forcing.hpp"
#include "snslab/solver.hpp"
#include "snslab/spectral_ops.hpp"
#include "snslab/trajectory.hpp"

using namespace snslab;

namespace {

ScenarioConfig base_config(int n, double dt) {
    ScenarioConfig cfg;
    cfg.n = n;
    cfg.dt = dt;
    cfg.nu = 0.5;
    cfg.sigma = 1.0;
    cfg.forcing = Forcing::zero(n);
    cfg.h = SpectralField(n);
    return cfg;
}

// Global relative error of the Taylor-Green run with z == c against
// v0 e^{(-2 nu + sigma c) t} on [0, 1].
double taylor_green_error(double c, double dt) {
    ScenarioConfig cfg = base_config(16, dt);
    const auto z = noise::OUPath::constant(c, cfg.sigma, -1.0, 2.0, 0.001);
    const SpectralField v0 = taylor_green(16);
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

}  // namespace

TEST_CASE("Taylor-Green decays in closed form with z == 0") {
    CHECK(taylor_green_error(0.0, 1e-3) <= 1e-12);
}

TEST_CASE("Taylor-Green with constant z: second-order convergence") {
    const double e1 = taylor_green_error(1.0, 1e-3);
    const double e2 = taylor_green_error(1.0, 5e-4);
    CHECK(e1 <= 1e-4);
    CHECK(e1 / e2 >= 3.5);
    CHECK(e1 / e2 <= 4.5);
}

TEST_CASE("additive system with h = 0 reduces to the deterministic equation") {
    ScenarioConfig add = base_config(16, 0.01);
    add.noise = NoiseKind::Additive;
    add.forcing = Forcing::example(sin_pair(16, 2, 1.0));
    ScenarioConfig mult = add;
    mult.noise = NoiseKind::Multiplicative;
    const auto w = noise::sample_wiener(4, -5.0, 5.0, 0.01);
    const auto z = noise::ou_from_wiener(w, 1.0);
    const auto zero = noise::OUPath::constant(0.0, 1.0, -5.0, 5.0, 0.01);
    const SpectralField v0 = random_field(16, 3, 1, 2.0);
    const auto a = solve(add, v0, -1.0, 0.0, z);
    const auto m = solve(mult, v0, -1.0, 0.0, zero);
    CHECK(norm_H(a.final_state - m.final_state) <= 1e-12 * norm_H(m.final_state));
}

TEST_CASE("additive right-hand side at v = 0 is c (sigma - 2 nu) h for Taylor-Green h") {
    ScenarioConfig cfg = base_config(16, 0.01);
    cfg.noise = NoiseKind::Additive;
    cfg.sigma = 3.0;
    cfg.h = taylor_green(16);
    const double c = 0.7;
    const SpectralField r = explicit_rhs(SpectralField(16), 0.0, c, cfg);
    const SpectralField expected = c * (cfg.sigma - 2.0 * cfg.nu) * cfg.h;
    CHECK(norm_H(r - expected) <= 1e-12 * norm_H(expected));
}

TEST_CASE("u and v variables round trip") {
    ScenarioConfig cfg = base_config(16, 0.01);
    const SpectralField v = random_field(16, 1, 2, 1.5);
    for (double z : {-1.3, 0.0, 0.8}) {
        CHECK(norm_H(u_to_v(v_to_u(v, z, cfg), z, cfg) - v) <= 1e-14 * norm_H(v));
        CHECK(norm_H(v_to_u(v, z, cfg)) == doctest::Approx(std::exp(z) * norm_H(v)).epsilon(1e-14));
    }
    cfg.noise = NoiseKind::Additive;
    cfg.h = taylor_green(16);
    const SpectralField u = v_to_u(v, 0.4, cfg);
    CHECK(norm_H(u - v - 0.4 * cfg.h) <= 1e-14);
    CHECK(norm_H(u_to_v(u, 0.4, cfg) - v) <= 1e-14);
}

TEST_CASE("solve rejects uncovered windows and aborts on blow-up") {
    ScenarioConfig cfg = base_config(16, 0.01);
    const auto z = noise::OUPath::constant(0.0, 1.0, -1.0, 1.0, 0.01);
    const SpectralField v0 = random_field(16, 1, 2, 3.0);
    CHECK_THROWS_AS(solve(cfg, v0, -2.0, 0.0, z), PathCoverageError);
    CHECK_THROWS_AS(solve(cfg, v0, 0.0, 1.5, z), PathCoverageError);
    CHECK_THROWS_AS(solve(cfg, v0, 0.5, 0.0, z), ValidationError);

    cfg.blowup_factor = 1e-3;
    CHECK_THROWS_AS(solve(cfg, v0, 0.0, 0.5, z), NumericalAbort);
}

TEST_CASE("cocycle property: one shot equals two legs") {
    ScenarioConfig cfg = base_config(16, 0.01);
    cfg.forcing = Forcing::example(sin_pair(16, 2, 1.0));
    const auto w = noise::sample_wiener(12, -10.0, 10.0, 0.01);
    const auto z = noise::ou_from_wiener(w, cfg.sigma);
    const SpectralField v0 = random_field(16, 6, 1, 2.0);
    const double tau = -3.0, s = 1.5, t = 2.0;
    const SpectralField once = cocycle(cfg, s + t, tau, z, v0);
    const SpectralField first = cocycle(cfg, s, tau, z, v0);
    const SpectralField twice = cocycle(cfg, t, tau + s, z.relabeled(s), first);
    CHECK(std::abs(norm_H(once) - norm_H(twice)) <= 1e-10 * norm_H(once));
    CHECK(norm_H(once - twice) <= 1e-10 * norm_H(once));
}

TEST_CASE("recorded trajectory has one row per step") {
    ScenarioConfig cfg = base_config(16, 0.01);
    const auto z = noise::OUPath::constant(0.2, 1.0, -1.0, 1.0, 0.01);
    SolveOptions opts;
    opts.stride = 10;
    const auto r = solve(cfg, taylor_green(16), 0.0, 1.0, z, opts);
    CHECK(r.record.size() == 11);
    CHECK(r.record.t.back() == doctest::Approx(1.0));
    CHECK(r.record.all_finite());
    CHECK_THROWS_AS(energy_residual(r.record, {}), ValidationError);
}

TEST_CASE("energy balance on the Taylor-Green run") {
    ScenarioConfig cfg = base_config(16, 1e-3);
    const double c = 0.3;
    const auto z = noise::OUPath::constant(c, 1.0, -1.0, 2.0, 0.001);
    const auto r = solve(cfg, taylor_green(16), 0.0, 1.0, z);
    const EnergyParams p{cfg.nu, cfg.sigma, 1.0};
    const auto res = energy_residual(r.record, p);
    const auto defect = energy_identity_defect(r.record, p);
    for (std::size_t i = 0; i < res.size(); ++i) {
        const double e = r.record.norm_H_sq[i];
        // the inequality holds with slack exactly 2 nu |v|^2 when f = 0
        CHECK(res[i] == doctest::Approx(-2.0 * cfg.nu * e).epsilon(1e-5));
        CHECK(std::abs(defect[i]) <= 1e-5 * e);
    }
}

TEST_CASE("energy identity defect converges at second order") {
    // A smooth synthetic noise path: the OU path itself is too rough for the
    // finite differences to show their order.
    std::vector<double> zs;
    for (int n = -5000; n <= 1000; ++n) zs.push_back(0.8 * std::sin(3.0 * n * 1e-3));
    const noise::OUPath z(1.0, -5000, 1e-3, zs);
    const SpectralField v0 = random_field(16, 5, 2, 2.0);
    const auto run = [&](double dt) {
        ScenarioConfig cfg = base_config(16, dt);
        cfg.forcing = Forcing::example(sin_pair(16, 2, 1.0));
        const auto r = solve(cfg, v0, -2.0, 0.0, z);
        const auto d = energy_identity_defect(r.record, {cfg.nu, cfg.sigma, 1.0});
        double worst = 0.0;
        // skip the end points, whose one-sided differences dominate
        for (std::size_t i = 1; i + 1 < d.size(); ++i) worst = std::max(worst, std::abs(d[i]));
        return worst;
    };
    const double coarse = run(0.02);
    const double fine = run(0.01);
    CHECK(coarse / fine >= 1.8);
}

TEST_CASE("velocity bound dominates the grid maximum") {
    ScenarioConfig cfg = base_config(16, 0.01);
    const SpectralField v = random_field(16, 8, 3, 2.0);
    const auto p = to_physical(v_to_u(v, 0.5, cfg));
    double vmax = 0.0;
    for (std::size_t i = 0; i < p.u1.size(); ++i) vmax = std::max(vmax, std::hypot(p.u1[i], p.u2[i]));
    CHECK(velocity_bound(v, 0.5, cfg) >= vmax * (1.0 - 1e-12));
}

TEST_CASE("tempered forcing integral: quadrature against closed form") {
    const SpectralField f0 = sin_pair(16, 2, 1.0);
    const Forcing f = Forcing::example(f0);
    for (double gamma : {0.5, 1.0 / 6.0}) {
        for (double tau : {0.0, -3.0}) {
            const double q = tempered_F_quadrature(f, gamma, tau);
            const double exact = tempered_F_example(norm_H_sq(f0), gamma, tau);
            CHECK(q == doctest::Approx(exact).epsilon(0.01));
        }
    }
    for (double tau : {0.0, -2.0, -7.0}) {
        CHECK(f.tail_integral(tau) == doctest::Approx(std::exp(2.0 * tau) * norm_H_sq(f0) / 2.0).epsilon(1e-12));
    }
    CHECK(Forcing::constant(f0).tail_integral(0.0) == 0.0);
    CHECK(f.amplitude_infinity() == 1.0);
    CHECK(f.amplitude(0.0) == doctest::Approx(2.0));
}
