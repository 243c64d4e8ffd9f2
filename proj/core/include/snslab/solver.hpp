#pragma once

// Time integration of the transformed, pathwise deterministic systems
//   multiplicative: v' + nu A v + e^{z} B(v)     = e^{-z} f + sigma z v
//   additive:       v' + nu A v + B(v + h z)     = f + sigma h z - nu z A h
// with u = e^{z} v or u = v + h z respectively.

#include <functional>
#include <optional>
#include <vector>

#include "snslab/forcing.hpp"
#include "snslab/ou_noise.hpp"
#include "snslab/spectral_field.hpp"
#include "snslab/trajectory.hpp"

namespace snslab {

enum class NoiseKind { Multiplicative, Additive };

struct ScenarioConfig {
    double nu = 0.5;
    double sigma = 1.0;
    double lambda1 = 1.0;
    NoiseKind noise = NoiseKind::Multiplicative;
    SpectralField h;  // additive noise profile, must be on the grid
    Forcing forcing;
    int n = 32;
    double dt = 1e-3;
    bool nonlinear = true;  // false gives the linear test system
    /// Abort when |v|_H^2 exceeds blowup_factor * max(1, blowup_reference).
    double blowup_factor = 1e6;
    double blowup_reference = 1.0;
    /// A grid step is split into 2^j substeps so that dt_sub * max|velocity| * K
    /// stays below max_cfl (K the dealiasing cutoff). 0 disables substepping.
    double max_cfl = 0.5;

    /// Backward tempered rate nu * lambda1 / 3 of the attracted universe.
    double tempered_rate() const { return nu * lambda1 / 3.0; }
};

/// u from v at noise value z.
SpectralField v_to_u(const SpectralField& v, double z, const ScenarioConfig& cfg);
/// v from u at noise value z.
SpectralField u_to_v(const SpectralField& u, double z, const ScenarioConfig& cfg);

/// Explicit part of the right-hand side (everything except -nu A v).
SpectralField explicit_rhs(const SpectralField& v, double t, double z, const ScenarioConfig& cfg);

/// Two-stage integrating-factor Runge-Kutta (Heun) step with exact diffusion:
///   v1  = E (v + dt N(v, t))
///   v+  = E v + dt/2 (E N(v, t) + N(v1, t + dt)),   E = e^{-nu |k|^2 dt}.
class Stepper {
public:
    Stepper(const ScenarioConfig& cfg, double dt);
    SpectralField step(const SpectralField& v, double t, const noise::OUPath& z) const;
    double dt() const { return dt_; }

private:
    const ScenarioConfig& cfg_;
    double dt_;
    std::vector<double> decay_;  // per (ix, iky)
};

/// Upper bound on the advecting velocity, sum_k |u_k| with u the transported
/// field (e^z v or v + h z).
double velocity_bound(const SpectralField& v, double z, const ScenarioConfig& cfg);

SpectralField step_multiplicative(const SpectralField& v, double t, double dt, const noise::OUPath& z,
                                  const ScenarioConfig& cfg);
SpectralField step_additive(const SpectralField& v, double t, double dt, const noise::OUPath& z,
                            const ScenarioConfig& cfg);

struct SolveOptions {
    int stride = 1;            // record every stride-th step (0 disables recording)
    bool record = true;
    /// Called at every step (including t_start) with the current state.
    std::function<void(double, const SpectralField&)> observer;
};

struct SolveResult {
    SpectralField final_state;
    TrajectoryRecord record;
};

/// Integrate from t_start to t_end on the grid t_start + n dt. z must be
/// indexed by physical time and cover [t_start, t_end].
SolveResult solve(const ScenarioConfig& cfg, const SpectralField& v0, double t_start, double t_end,
                  const noise::OUPath& z, const SolveOptions& opts = {});

/// Cocycle map Phi(t, tau, omega) v0 in the v variable: integrate from tau to
/// tau + t with noise r -> z_omega(r - tau).
SpectralField cocycle(const ScenarioConfig& cfg, double t, double tau, const noise::OUPath& z_omega,
                      const SpectralField& v0);

/// Pullback solution v(tau, tau - t, theta_{-tau} omega, v0): noise r ->
/// z_omega(r - tau) on [tau - t, tau].
SolveResult pullback_solve(const ScenarioConfig& cfg, double tau, double t, const noise::OUPath& z_omega,
                           const SpectralField& v0, const SolveOptions& opts = {});

}  // namespace snslab
