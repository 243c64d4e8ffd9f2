#include "snslab/attractor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "snslab/errors.hpp"
#include "snslab/rng.hpp"

namespace snslab {

double field_distance(const SpectralField& a, const SpectralField& b, Norm norm) {
    const SpectralField d = a - b;
    return norm == Norm::H ? norm_H(d) : norm_V(d);
}

double hausdorff_semidist(const std::vector<SpectralField>& A, const std::vector<SpectralField>& B, Norm norm) {
    if (A.empty() || B.empty()) throw ValidationError("hausdorff_semidist: empty set");
    double sup = 0.0;
    for (const auto& a : A) {
        double inf = std::numeric_limits<double>::infinity();
        for (const auto& b : B) inf = std::min(inf, field_distance(a, b, norm));
        sup = std::max(sup, inf);
    }
    return sup;
}

double hausdorff_distance(const std::vector<SpectralField>& A, const std::vector<SpectralField>& B, Norm norm) {
    return std::max(hausdorff_semidist(A, B, norm), hausdorff_semidist(B, A, norm));
}

double diameter(const std::vector<SpectralField>& A, Norm norm) {
    double d = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        for (std::size_t j = i + 1; j < A.size(); ++j) d = std::max(d, field_distance(A[i], A[j], norm));
    }
    return d;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<SpectralField> sample_ball(int n, int members, double R0, std::uint64_t seed) {
    if (members < 1) throw ValidationError("sample_ball: need at least one member");
    std::vector<SpectralField> out;
    out.reserve(static_cast<std::size_t>(members));
    for (int m = 0; m < members; ++m) {
        const std::uint64_t stream = rng::kEnsembleBase + static_cast<std::uint64_t>(m);
        // Radius from the last counter of the member's stream, direction from the rest.
        const double radius = R0 * std::sqrt(rng::uniform(seed, stream, ~std::uint64_t{0}));
        out.push_back(random_field(n, seed, stream, radius));
    }
    return out;
}

AttractorApprox evolve_pullback(const ScenarioConfig& cfg, const PullbackSpec& spec, const noise::OUPath& z_omega) {
    if (spec.horizons.empty()) throw ValidationError("evolve_pullback: no horizons");
    for (std::size_t k = 1; k < spec.horizons.size(); ++k) {
        if (!(spec.horizons[k] > spec.horizons[k - 1])) throw ValidationError("evolve_pullback: horizons must increase");
    }
    const double t_max = spec.horizons.back();
    if (!z_omega.covers(-t_max, 0.0)) {
        throw PathCoverageError("evolve_pullback: noise path must cover [-max horizon, 0]");
    }
    const std::vector<SpectralField> ball = sample_ball(cfg.n, spec.members, spec.R0, spec.seed);
    const double z_end = z_omega.at(0.0);

    AttractorApprox approx;
    for (double t : spec.horizons) {
        Ensemble e;
        e.time = spec.tau;
        e.tau = spec.tau;
        e.horizon = t;
        e.seed = spec.seed;
        e.members.resize(ball.size());
        e.v_members.resize(ball.size());
        const double z_start = z_omega.at(-t);
        parallel_for(ball.size(), spec.threads, [&](std::size_t m) {
            SolveOptions opts;
            opts.record = false;
            const SpectralField v0 = u_to_v(ball[m], z_start, cfg);
            SolveResult r = pullback_solve(cfg, spec.tau, t, z_omega, v0, opts);
            e.members[m] = v_to_u(r.final_state, z_end, cfg);
            e.v_members[m] = std::move(r.final_state);
        });
        approx.images.push_back(std::move(e));
    }
    approx.first_diameter = diameter(approx.images.front().members, Norm::H);
    approx.threshold = spec.stabilization * approx.first_diameter;
    for (std::size_t k = 1; k < approx.images.size(); ++k) {
        approx.consecutive_H.push_back(
            hausdorff_distance(approx.images[k - 1].members, approx.images[k].members, Norm::H));
        approx.consecutive_V.push_back(
            hausdorff_distance(approx.images[k - 1].members, approx.images[k].members, Norm::V));
    }
    approx.converged = approx.consecutive_H.empty() ? spec.members == 1
                                                    : approx.consecutive_H.back() <= approx.threshold;
    return approx;
}

AlephEstimate estimate_aleph(const SpectralField& h, int trials, std::uint64_t seed, int oversample) {
    AlephEstimate est;
    est.aleph = max_sym_grad_norm(h, oversample);
    for (int k = 0; k < trials; ++k) {
        const SpectralField u = random_field(h.n(), seed, rng::kTrialFields + static_cast<std::uint64_t>(k), 1.0);
        est.lower_bound = std::max(est.lower_bound, std::abs(trilinear_b(u, h, u)) / norm_H_sq(u));
    }
    return est;
}

double suggest_sigma(double aleph, double nu, double lambda1, double floor) {
    if (!(nu > 0.0) || !(lambda1 > 0.0)) throw ValidationError("suggest_sigma: nu and lambda1 must be positive");
    const double threshold = 36.0 * aleph * aleph / (std::numbers::pi * nu * nu * lambda1 * lambda1);
    return std::max(threshold, floor);
}

std::vector<FlatteningRow> flattening_profile(const std::vector<SpectralField>& v_members, const std::vector<int>& i_list,
                                              const EigenOrdering& ord) {
    std::vector<FlatteningRow> rows;
    for (int i : i_list) {
        FlatteningRow row;
        row.i = i;
        row.lambda_next = i < ord.size() ? ord.lambda(i + 1) : std::numeric_limits<double>::infinity();
        for (const auto& v : v_members) row.tail_V = std::max(row.tail_V, norm_V(residual_Q(v, i, ord)));
        rows.push_back(row);
    }
    return rows;
}

AutonomyResult autonomy_curve(const ScenarioConfig& cfg, const std::vector<double>& taus, const PullbackSpec& base,
                              const noise::OUPath& z_omega) {
    AutonomyResult out;
    ScenarioConfig autonomous = cfg;
    autonomous.forcing = cfg.forcing.autonomous();
    PullbackSpec spec0 = base;
    spec0.tau = 0.0;
    out.autonomous = evolve_pullback(autonomous, spec0, z_omega);
    if (!out.autonomous.converged) throw Unconverged("autonomy_curve: autonomous attractor did not stabilize");
    const auto& reference = out.autonomous.final_image().members;

    for (double tau : taus) {
        PullbackSpec spec = base;
        spec.tau = tau;
        const AttractorApprox approx = evolve_pullback(cfg, spec, z_omega);
        AutonomyRow row;
        row.tau = tau;
        row.converged = approx.converged;
        row.dist_H = hausdorff_semidist(approx.final_image().members, reference, Norm::H);
        row.dist_V = hausdorff_semidist(approx.final_image().members, reference, Norm::V);
        row.tail = cfg.forcing.tail_integral(tau);
        out.rows.push_back(row);
    }
    return out;
}

double smooth_bump(double t, double a, double b) {
    if (!(t > a && t < b)) return 0.0;
    const double x = (2.0 * t - a - b) / (b - a);  // in (-1, 1)
    return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

std::vector<ContinuityRow> noise_continuity_test(const ScenarioConfig& cfg, const noise::WienerPath& w0,
                                                 const std::vector<double>& amplitudes, double tau, double T,
                                                 const SpectralField& v0) {
    const noise::OUPath z0 = noise::ou_from_wiener(w0, cfg.sigma);
    std::vector<SpectralField> reference;
    SolveOptions ref_opts;
    ref_opts.record = false;
    ref_opts.observer = [&](double, const SpectralField& v) { reference.push_back(v); };
    solve(cfg, v0, tau, tau + T, z0, ref_opts);

    std::vector<ContinuityRow> rows;
    for (double eps : amplitudes) {
        const noise::WienerPath wk =
            noise::perturb_path(w0, [&](double t) { return eps * smooth_bump(t, tau, tau + T); });
        const noise::OUPath zk = noise::ou_from_wiener(wk, cfg.sigma);
        ContinuityRow row;
        row.epsilon = eps;
        row.path_distance = noise::path_distance(wk, w0);
        std::size_t step = 0;
        SolveOptions opts;
        opts.record = false;
        opts.observer = [&](double, const SpectralField& v) {
            row.deviation = std::max(row.deviation, norm_H(v - reference[step]));
            ++step;
        };
        solve(cfg, v0, tau, tau + T, zk, opts);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace snslab
