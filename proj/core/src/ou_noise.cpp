#include "snslab/ou_noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "snslab/errors.hpp"
#include "snslab/rng.hpp"

namespace snslab::noise {
namespace {

constexpr double kGridTolerance = 1e-9;

std::optional<std::int64_t> grid_index(double t, double dt) {
    const double scaled = t / dt;
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > kGridTolerance * std::max(1.0, std::abs(scaled))) {
        return std::nullopt;
    }
    return static_cast<std::int64_t>(rounded);
}

std::int64_t require_grid_index(double t, double dt, const char* what) {
    const auto n = grid_index(t, dt);
    if (!n) {
        std::ostringstream msg;
        msg << what << " = " << t << " is not a multiple of dt = " << dt;
        throw ValidationError(msg.str());
    }
    return *n;
}

}  // namespace

WienerPath WienerPath::from_values(std::int64_t first_index, double dt, std::vector<double> values,
                                   std::uint64_t seed) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("wiener path: dt must be positive");
    const auto last = first_index + static_cast<std::int64_t>(values.size()) - 1;
    if (values.empty() || first_index > 0 || last < 0) {
        throw ValidationError("wiener path: grid must contain t = 0");
    }
    if (values[static_cast<std::size_t>(-first_index)] != 0.0) {
        throw ValidationError("wiener path: W(0) must be exactly 0");
    }
    return WienerPath(first_index, dt, std::move(values), seed);
}

double WienerPath::at_index(std::int64_t index) const {
    if (index < first_index_ || index > last_index()) {
        throw PathCoverageError("wiener path: index outside window");
    }
    return values_[static_cast<std::size_t>(index - first_index_)];
}

std::optional<std::int64_t> WienerPath::index_of(double t) const { return grid_index(t, dt_); }

double WienerPath::at(double t) const { return at_index(require_grid_index(t, dt_, "t")); }

WienerPath sample_wiener(std::uint64_t seed, double t_min, double t_max, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("sample_wiener: dt must be positive");
    if (!(t_min <= 0.0 && 0.0 <= t_max)) {
        throw ValidationError("sample_wiener: window [t_min, t_max] must contain 0");
    }
    const std::int64_t first = require_grid_index(t_min, dt, "t_min");
    const std::int64_t last = require_grid_index(t_max, dt, "t_max");

    std::vector<double> values(static_cast<std::size_t>(last - first + 1), 0.0);
    const std::size_t zero = static_cast<std::size_t>(-first);
    const double scale = std::sqrt(dt);
    auto increment = [&](std::int64_t n) {
        return scale * rng::normal(seed, rng::kWienerIncrements, rng::counter_of(n));
    };
    for (std::size_t i = zero; i + 1 < values.size(); ++i) {
        const auto n = first + static_cast<std::int64_t>(i);
        values[i + 1] = values[i] + increment(n);
    }
    for (std::size_t i = zero; i > 0; --i) {
        const auto n = first + static_cast<std::int64_t>(i) - 1;
        values[i - 1] = values[i] - increment(n);
    }
    return WienerPath::from_values(first, dt, std::move(values), seed);
}

WienerPath shift_path(const WienerPath& w, double s) {
    const auto k = w.index_of(s);
    if (!k) throw ValidationError("shift_path: shift is not on the path grid");
    if (*k < w.first_index() || *k > w.last_index()) {
        throw ValidationError("shift_path: shifted window is empty (s outside the path window)");
    }
    const double ws = w.at_index(*k);
    std::vector<double> values(w.values().begin(), w.values().end());
    for (double& v : values) v -= ws;
    // w(s) - w(s) is exactly zero, so the invariant at the new origin holds.
    return WienerPath::from_values(w.first_index() - *k, w.dt(), std::move(values), w.seed());
}

double path_distance(const WienerPath& w1, const WienerPath& w2, int m_max) {
    if (w1.dt() != w2.dt() || w1.first_index() != w2.first_index() || w1.size() != w2.size()) {
        throw ValidationError("path_distance: paths live on different grids");
    }
    if (m_max < 1) throw ValidationError("path_distance: m_max must be >= 1");
    double total = 0.0;
    for (int m = 1; m <= m_max; ++m) {
        double sup = 0.0;
        for (std::int64_t n = w1.first_index(); n <= w1.last_index(); ++n) {
            if (std::abs(w1.time_at(n)) <= m * (1.0 + 1e-12)) {
                sup = std::max(sup, std::abs(w1.at_index(n) - w2.at_index(n)));
            }
        }
        total += std::ldexp(1.0, -m) * sup / (1.0 + sup);
    }
    return total;
}

OUPath::OUPath(double sigma, std::int64_t first_index, double dt, std::vector<double> z)
    : sigma_(sigma), first_index_(first_index), dt_(dt), z_(std::move(z)) {
    if (!(dt_ > 0.0)) throw ValidationError("ou path: dt must be positive");
    if (z_.empty()) throw ValidationError("ou path: empty");
}

OUPath OUPath::constant(double value, double sigma, double t_min, double t_max, double dt) {
    if (!(dt > 0.0)) throw ValidationError("ou path: dt must be positive");
    if (t_max < t_min) throw ValidationError("ou path: empty window");
    const std::int64_t first = require_grid_index(t_min, dt, "t_min");
    const std::int64_t last = require_grid_index(t_max, dt, "t_max");
    return OUPath(sigma, first, dt, std::vector<double>(static_cast<std::size_t>(last - first + 1), value));
}

double OUPath::at_index(std::int64_t index) const {
    if (index < first_index_ || index > last_index()) {
        throw PathCoverageError("ou path: index outside window");
    }
    return z_[static_cast<std::size_t>(index - first_index_)];
}

bool OUPath::covers(double a, double b) const {
    const double slack = kGridTolerance * dt_;
    return a >= t_min() - slack && b <= t_max() + slack;
}

double OUPath::at(double t) const {
    if (!covers(t, t)) {
        std::ostringstream msg;
        msg << "ou path: t = " << t << " outside window [" << t_min() << ", " << t_max() << "]";
        throw PathCoverageError(msg.str());
    }
    const double x = t / dt_ - static_cast<double>(first_index_);
    const double last = static_cast<double>(z_.size() - 1);
    const double clamped = std::clamp(x, 0.0, last);
    const double cell = std::floor(clamped);
    const auto i = static_cast<std::size_t>(cell);
    if (i + 1 >= z_.size()) return z_.back();
    const double frac = clamped - cell;
    if (frac == 0.0) return z_[i];
    return (1.0 - frac) * z_[i] + frac * z_[i + 1];
}

double OUPath::integral(double a, double b) const {
    if (b < a) return -integral(b, a);
    if (!covers(a, b)) throw PathCoverageError("ou path: integral window outside path");
    // Grid points strictly inside (a, b), plus the interpolated end points.
    const auto lo = static_cast<std::int64_t>(std::floor(a / dt_ + kGridTolerance)) + 1;
    const auto hi = static_cast<std::int64_t>(std::ceil(b / dt_ - kGridTolerance)) - 1;
    double total = 0.0;
    double prev_t = a;
    double prev_z = at(a);
    for (std::int64_t n = lo; n <= hi; ++n) {
        const double t = time_at(n);
        const double z = at_index(n);
        total += 0.5 * (t - prev_t) * (z + prev_z);
        prev_t = t;
        prev_z = z;
    }
    total += 0.5 * (b - prev_t) * (at(b) + prev_z);
    return total;
}

OUPath OUPath::relabeled(double s) const {
    const auto k = grid_index(s, dt_);
    if (!k) throw ValidationError("ou path: relabel shift not on the grid");
    return OUPath(sigma_, first_index_ - *k, dt_, z_);
}

std::vector<double> ou_exact_recursion(double z0, double sigma, double dt,
                                       std::span<const double> wiener_increments) {
    if (!(sigma > 0.0)) throw ValidationError("ou: sigma must be positive");
    const double decay = std::exp(-sigma * dt);
    const double scale = std::sqrt(-std::expm1(-2.0 * sigma * dt) / (2.0 * sigma * dt));
    std::vector<double> z(wiener_increments.size() + 1);
    z[0] = z0;
    for (std::size_t n = 0; n < wiener_increments.size(); ++n) {
        z[n + 1] = decay * z[n] + scale * wiener_increments[n];
    }
    return z;
}

OUPath ou_from_wiener(const WienerPath& w, double sigma, std::optional<double> z_initial) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("ou_from_wiener: sigma must be positive");
    const auto values = w.values();
    std::vector<double> increments(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) increments[i] = values[i + 1] - values[i];
    const double z0 = z_initial.value_or(rng::normal(w.seed(), rng::kOuStationary, 0) /
                                         std::sqrt(2.0 * sigma));
    return OUPath(sigma, w.first_index(), w.dt(), ou_exact_recursion(z0, sigma, w.dt(), increments));
}

OUReport ou_property_report(const OUPath& z, double delta, std::optional<double> decay_time) {
    OUReport r;
    r.sigma = z.sigma();
    r.delta = delta;
    r.horizon = z.t_max();
    r.horizon_ok = z.sigma() > 0.0 && r.horizon >= 100.0 / z.sigma();
    r.second_moment_target = z.sigma() > 0.0 ? 1.0 / (2.0 * z.sigma()) : 0.0;

    if (r.horizon > 0.0 && z.covers(0.0, r.horizon)) {
        r.ergodic_average = z.integral(0.0, r.horizon) / r.horizon;
    }
    double moment = 0.0;
    for (std::int64_t n = z.first_index(); n <= z.last_index(); ++n) {
        const double t = z.time_at(n);
        const double v = z.at_index(n);
        r.max_growth_ratio = std::max(r.max_growth_ratio, std::abs(v) / (1.0 + std::abs(t)));
        moment += v * v;
    }
    r.second_moment = moment / static_cast<double>(z.size());

    r.decay_time = decay_time.value_or(std::min(100.0, std::max(0.0, -z.t_min())));
    if (z.covers(-r.decay_time, -r.decay_time)) {
        r.backward_decay = std::exp(-delta * r.decay_time) * std::abs(z.at(-r.decay_time));
    }
    return r;
}

double ou_absolute_moment(double sigma, double xi) {
    return std::tgamma(0.5 * (1.0 + xi)) / std::sqrt(std::numbers::pi * std::pow(sigma, xi));
}

}  // namespace snslab::noise
