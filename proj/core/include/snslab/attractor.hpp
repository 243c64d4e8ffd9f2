#pragma once

// Pullback attractor approximation by ensembles, Hausdorff semi-distances,
// the additive-noise constant aleph, flattening tails, asymptotic autonomy and
// noise continuity experiments.

#include <cstdint>
#include <functional>
#include <vector>

#include "snslab/ou_noise.hpp"
#include "snslab/solver.hpp"
#include "snslab/spectral_field.hpp"
#include "snslab/spectral_ops.hpp"

namespace snslab {

enum class Norm { H, V };

double field_distance(const SpectralField& a, const SpectralField& b, Norm norm);

/// dist(A, B) = sup_{a in A} inf_{b in B} |a - b|. Throws on empty sets.
double hausdorff_semidist(const std::vector<SpectralField>& A, const std::vector<SpectralField>& B, Norm norm);
/// max(dist(A, B), dist(B, A)).
double hausdorff_distance(const std::vector<SpectralField>& A, const std::vector<SpectralField>& B, Norm norm);
/// Largest pairwise distance inside a set.
double diameter(const std::vector<SpectralField>& A, Norm norm);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// handled exactly once, so writes to per-index slots are deterministic.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

struct Ensemble {
    std::vector<SpectralField> members;    // u variable at `time`
    std::vector<SpectralField> v_members;  // transformed variable at `time`
    double time = 0.0;
    double tau = 0.0;
    double horizon = 0.0;
    std::uint64_t seed = 0;
};

/// M fields with H norms spread in (0, R0], one RNG stream per member.
std::vector<SpectralField> sample_ball(int n, int members, double R0, std::uint64_t seed);

struct PullbackSpec {
    double tau = 0.0;
    std::vector<double> horizons{2.0, 4.0, 8.0, 16.0, 24.0};
    double R0 = 1.0;  // radius of the H ball of initial data (u variable)
    int members = 64;
    std::uint64_t seed = 1;
    int threads = 1;
    double stabilization = 1e-3;  // relative to the first image's H diameter
};

struct AttractorApprox {
    std::vector<Ensemble> images;          // one per horizon
    std::vector<double> consecutive_H;     // Hausdorff distance between images k-1 and k
    std::vector<double> consecutive_V;
    double first_diameter = 0.0;
    double threshold = 0.0;
    bool converged = false;

    const Ensemble& final_image() const { return images.back(); }
};

/// For each horizon t, evolve the ball from tau - t to tau along r -> z_omega(r - tau).
AttractorApprox evolve_pullback(const ScenarioConfig& cfg, const PullbackSpec& spec, const noise::OUPath& z_omega);

struct AlephEstimate {
    double aleph = 0.0;        // max over the grid of |sym grad h|
    double lower_bound = 0.0;  // best |b(u,h,u)| / |u|^2 over random trials
};

AlephEstimate estimate_aleph(const SpectralField& h, int trials = 64, std::uint64_t seed = 11, int oversample = 4);

/// max(36 aleph^2 / (pi nu^2 lambda1^2), floor).
double suggest_sigma(double aleph, double nu, double lambda1, double floor = 1e-3);

struct FlatteningRow {
    int i = 0;
    double lambda_next = 0.0;  // lambda_{i+1}
    double tail_V = 0.0;       // max over members of |Q_i v|_V
};

/// Tails of the v ensemble for each i.
std::vector<FlatteningRow> flattening_profile(const std::vector<SpectralField>& v_members, const std::vector<int>& i_list,
                                              const EigenOrdering& ord);

struct AutonomyRow {
    double tau = 0.0;
    double dist_H = 0.0;
    double dist_V = 0.0;
    double tail = 0.0;  // int_{-inf}^{tau} |f - f_inf|^2
    bool converged = false;
};

struct AutonomyResult {
    std::vector<AutonomyRow> rows;
    AttractorApprox autonomous;
};

/// dist_X(A(tau, omega), A_inf(omega)) for each tau; A_inf uses f_inf at tau = 0.
AutonomyResult autonomy_curve(const ScenarioConfig& cfg, const std::vector<double>& taus, const PullbackSpec& base,
                              const noise::OUPath& z_omega);

struct ContinuityRow {
    double epsilon = 0.0;
    double deviation = 0.0;      // sup_t |v^eps(t) - v^0(t)|_H on [tau, tau + T]
    double path_distance = 0.0;  // d(omega_eps, omega_0)
};

/// Smooth bump supported in (a, b), peak 1 at the midpoint.
double smooth_bump(double t, double a, double b);

/// Perturb omega0 by eps * bump on (tau, tau + T) and compare solutions.
std::vector<ContinuityRow> noise_continuity_test(const ScenarioConfig& cfg, const noise::WienerPath& w0,
                                                 const std::vector<double>& amplitudes, double tau, double T,
                                                 const SpectralField& v0);

}  // namespace snslab
