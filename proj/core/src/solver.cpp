#include "snslab/solver.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "snslab/errors.hpp"
#include "snslab/spectral_ops.hpp"

namespace snslab {
namespace {

bool has_h(const ScenarioConfig& cfg) { return cfg.h.n() == cfg.n; }

long step_count(double t_start, double t_end, double dt) {
    const double steps = (t_end - t_start) / dt;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
        std::ostringstream msg;
        msg << "solve: interval [" << t_start << ", " << t_end << "] is not a multiple of dt = " << dt;
        throw ValidationError(msg.str());
    }
    return static_cast<long>(rounded);
}

}  // namespace

SpectralField v_to_u(const SpectralField& v, double z, const ScenarioConfig& cfg) {
    if (cfg.noise == NoiseKind::Multiplicative) return std::exp(z) * v;
    SpectralField u = v;
    if (has_h(cfg)) u.axpy(z, cfg.h);
    return u;
}

SpectralField u_to_v(const SpectralField& u, double z, const ScenarioConfig& cfg) {
    if (cfg.noise == NoiseKind::Multiplicative) return std::exp(-z) * u;
    SpectralField v = u;
    if (has_h(cfg)) v.axpy(-z, cfg.h);
    return v;
}

SpectralField explicit_rhs(const SpectralField& v, double t, double z, const ScenarioConfig& cfg) {
    SpectralField out(v.n());
    if (cfg.noise == NoiseKind::Multiplicative) {
        if (cfg.nonlinear) out.axpy(-std::exp(z), nonlinear_B(v));
        if (!cfg.forcing.is_zero()) out.axpy(std::exp(-z) * cfg.forcing.amplitude(t), cfg.forcing.shape());
        out.axpy(cfg.sigma * z, v);
        return out;
    }
    if (cfg.nonlinear) {
        if (has_h(cfg)) {
            SpectralField w = v;
            w.axpy(z, cfg.h);
            out.axpy(-1.0, nonlinear_B(w));
        } else {
            out.axpy(-1.0, nonlinear_B(v));
        }
    }
    if (!cfg.forcing.is_zero()) out.axpy(cfg.forcing.amplitude(t), cfg.forcing.shape());
    if (has_h(cfg)) {
        out.axpy(cfg.sigma * z, cfg.h);
        out.axpy(-cfg.nu * z, apply_A(cfg.h));
    }
    return out;
}

Stepper::Stepper(const ScenarioConfig& cfg, double dt) : cfg_(cfg), dt_(dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("stepper: dt must be positive");
    if (!(cfg.nu > 0.0)) throw ValidationError("stepper: nu must be positive");
    const int n = cfg.n;
    const int nky = n / 2 + 1;
    decay_.resize(static_cast<std::size_t>(n) * nky);
    for (int ix = 0; ix < n; ++ix) {
        const double kx = ix <= n / 2 ? ix : ix - n;
        for (int iky = 0; iky < nky; ++iky) {
            const double k2 = kx * kx + static_cast<double>(iky) * iky;
            decay_[static_cast<std::size_t>(ix) * nky + iky] = std::exp(-cfg.nu * k2 * dt);
        }
    }
}

SpectralField Stepper::step(const SpectralField& v, double t, const noise::OUPath& z) const {
    if (v.n() != cfg_.n) throw ValidationError("step: field grid does not match the scenario");
    const double z0 = z.at(t);
    const double z1 = z.at(t + dt_);
    const std::size_t modes = v.modes();

    const SpectralField n0 = explicit_rhs(v, t, z0, cfg_);
    SpectralField stage(v.n());
    for (int comp = 0; comp < 2; ++comp) {
        auto s = stage.component(comp);
        const auto a = v.component(comp);
        const auto b = n0.component(comp);
        for (std::size_t i = 0; i < modes; ++i) s[i] = decay_[i] * (a[i] + dt_ * b[i]);
    }
    const SpectralField n1 = explicit_rhs(stage, t + dt_, z1, cfg_);
    SpectralField out(v.n());
    for (int comp = 0; comp < 2; ++comp) {
        auto o = out.component(comp);
        const auto a = v.component(comp);
        const auto b0 = n0.component(comp);
        const auto b1 = n1.component(comp);
        for (std::size_t i = 0; i < modes; ++i) {
            o[i] = decay_[i] * a[i] + 0.5 * dt_ * (decay_[i] * b0[i] + b1[i]);
        }
    }
    return out;
}

namespace {

double coefficient_sum(const SpectralField& v) {
    const int n = v.n();
    const int nky = n / 2 + 1;
    const auto a = v.component(0);
    const auto b = v.component(1);
    double total = 0.0;
    for (int ix = 0; ix < n; ++ix) {
        for (int iky = 0; iky < nky; ++iky) {
            const std::size_t i = static_cast<std::size_t>(ix) * nky + iky;
            const double mag = std::sqrt(std::norm(a[i]) + std::norm(b[i]));
            total += (iky == 0 ? 1.0 : 2.0) * mag;
        }
    }
    return total;
}

}  // namespace

double velocity_bound(const SpectralField& v, double z, const ScenarioConfig& cfg) {
    if (cfg.noise == NoiseKind::Multiplicative) return std::exp(z) * coefficient_sum(v);
    return coefficient_sum(v) + (has_h(cfg) ? std::abs(z) * coefficient_sum(cfg.h) : 0.0);
}

SpectralField step_multiplicative(const SpectralField& v, double t, double dt, const noise::OUPath& z,
                                  const ScenarioConfig& cfg) {
    if (cfg.noise != NoiseKind::Multiplicative) throw ValidationError("step_multiplicative: additive scenario");
    return Stepper(cfg, dt).step(v, t, z);
}

SpectralField step_additive(const SpectralField& v, double t, double dt, const noise::OUPath& z,
                            const ScenarioConfig& cfg) {
    if (cfg.noise != NoiseKind::Additive) throw ValidationError("step_additive: multiplicative scenario");
    return Stepper(cfg, dt).step(v, t, z);
}

SolveResult solve(const ScenarioConfig& cfg, const SpectralField& v0, double t_start, double t_end,
                  const noise::OUPath& z, const SolveOptions& opts) {
    if (!(t_end >= t_start)) throw ValidationError("solve: t_end must not precede t_start");
    if (!z.covers(t_start, t_end)) {
        std::ostringstream msg;
        msg << "solve: noise path [" << z.t_min() << ", " << z.t_max() << "] does not cover [" << t_start
            << ", " << t_end << "]";
        throw PathCoverageError(msg.str());
    }
    const long steps = step_count(t_start, t_end, cfg.dt);
    const Stepper stepper(cfg, cfg.dt);
    std::map<int, Stepper> substeppers;
    const int cutoff = dealias_cutoff(cfg.n);
    const double guard = cfg.blowup_factor * std::max(1.0, cfg.blowup_reference);

    SolveResult result;
    TrajectoryRecord& rec = result.record;
    rec.stride = opts.stride;
    rec.dt = cfg.dt * std::max(1, opts.stride);
    const bool recording = opts.record && opts.stride > 0;

    auto record = [&](double t, const SpectralField& v) {
        rec.t.push_back(t);
        rec.norm_H_sq.push_back(norm_H_sq(v));
        rec.norm_V_sq.push_back(norm_V_sq(v));
        rec.norm_DA_sq.push_back(norm_DA_sq(v));
        rec.z.push_back(z.at(t));
        rec.forcing_sq.push_back(cfg.forcing.norm_sq_at(t));
        rec.forcing_dot.push_back(cfg.forcing.is_zero() ? 0.0 : cfg.forcing.amplitude(t) * inner_H(cfg.forcing.shape(), v));
    };

    SpectralField v = v0;
    if (recording) record(t_start, v);
    if (opts.observer) opts.observer(t_start, v);
    for (long n = 0; n < steps; ++n) {
        const double t = t_start + static_cast<double>(n) * cfg.dt;
        int parts = 1;
        if (cfg.max_cfl > 0.0 && cfg.nonlinear) {
            const double speed = velocity_bound(v, std::max(z.at(t), z.at(t + cfg.dt)), cfg);
            const double cfl = cfg.dt * speed * cutoff;
            while (parts < 4096 && cfl / parts > cfg.max_cfl) parts *= 2;
        }
        if (parts == 1) {
            v = stepper.step(v, t, z);
        } else {
            auto it = substeppers.find(parts);
            if (it == substeppers.end()) it = substeppers.emplace(parts, Stepper(cfg, cfg.dt / parts)).first;
            for (int p = 0; p < parts; ++p) v = it->second.step(v, t + cfg.dt * p / parts, z);
        }
        const double t_next = t_start + static_cast<double>(n + 1) * cfg.dt;
        const double energy = norm_H_sq(v);
        if (!std::isfinite(energy) || energy > guard) {
            std::ostringstream msg;
            msg << "solve: blow-up at t = " << t_next << " (|v|_H^2 = " << energy << ", guard " << guard
                << "); reduce dt";
            throw NumericalAbort(msg.str());
        }
        if (recording && (n + 1) % opts.stride == 0) record(t_next, v);
        if (opts.observer) opts.observer(t_next, v);
    }
    result.final_state = std::move(v);
    return result;
}

SpectralField cocycle(const ScenarioConfig& cfg, double t, double tau, const noise::OUPath& z_omega,
                      const SpectralField& v0) {
    const noise::OUPath z = z_omega.relabeled(-tau);
    SolveOptions opts;
    opts.record = false;
    return solve(cfg, v0, tau, tau + t, z, opts).final_state;
}

SolveResult pullback_solve(const ScenarioConfig& cfg, double tau, double t, const noise::OUPath& z_omega,
                           const SpectralField& v0, const SolveOptions& opts) {
    const noise::OUPath z = z_omega.relabeled(-tau);
    return solve(cfg, v0, tau - t, tau, z, opts);
}

}  // namespace snslab
