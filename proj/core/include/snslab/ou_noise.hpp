#pragma once

// Two-sided Wiener paths, the Wiener shift and the stationary
// Ornstein-Uhlenbeck transform z(theta_t omega).
//
// Paths live on a uniform grid t_n = n * dt with integer indices
// n in [first_index, last_index]; index 0 is always present. Constructed paths
// are immutable and safe to share between threads.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace snslab::noise {

class WienerPath {
public:
    /// Takes ownership of raw values; validates the grid and W(0) = 0.
    static WienerPath from_values(std::int64_t first_index, double dt,
                                  std::vector<double> values, std::uint64_t seed);

    std::int64_t first_index() const { return first_index_; }
    std::int64_t last_index() const {
        return first_index_ + static_cast<std::int64_t>(values_.size()) - 1;
    }
    double dt() const { return dt_; }
    double t_min() const { return static_cast<double>(first_index_) * dt_; }
    double t_max() const { return static_cast<double>(last_index()) * dt_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }

    double time_at(std::int64_t index) const { return static_cast<double>(index) * dt_; }
    double at_index(std::int64_t index) const;
    /// Value at an on-grid time; throws ValidationError for off-grid t.
    double at(double t) const;
    /// Grid index of t, or nullopt when t is not a grid point (relative 1e-9).
    std::optional<std::int64_t> index_of(double t) const;

private:
    WienerPath(std::int64_t first_index, double dt, std::vector<double> values, std::uint64_t seed)
        : first_index_(first_index), dt_(dt), values_(std::move(values)), seed_(seed) {}

    std::int64_t first_index_;
    double dt_;
    std::vector<double> values_;
    std::uint64_t seed_;
};

/// Seeded Brownian path on [t_min, t_max]. Increment n -> n+1 is
/// sqrt(dt) * N(0,1) drawn at counter n, so overlapping windows with the same
/// seed and dt share their increments.
WienerPath sample_wiener(std::uint64_t seed, double t_min, double t_max, double dt);

/// theta_s w: t -> w(t + s) - w(s) on the relabelled window [t_min - s, t_max - s].
WienerPath shift_path(const WienerPath& w, double s);

/// w + bump(t), with the bump forced to zero at t = 0 so the result stays in Omega.
template <class Bump>
WienerPath perturb_path(const WienerPath& w, Bump&& bump) {
    std::vector<double> values(w.values().begin(), w.values().end());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::int64_t n = w.first_index() + static_cast<std::int64_t>(i);
        if (n != 0) values[i] += bump(w.time_at(n));
    }
    return WienerPath::from_values(w.first_index(), w.dt(), std::move(values), w.seed());
}

/// Truncated compact-open metric: sum_{m=1}^{m_max} 2^-m d_m / (1 + d_m),
/// d_m the sup of |w1 - w2| over [-m, m] intersected with the window.
double path_distance(const WienerPath& w1, const WienerPath& w2, int m_max = 10);

class OUPath {
public:
    OUPath(double sigma, std::int64_t first_index, double dt, std::vector<double> z);

    /// Synthetic path z == value, for closed-form tests.
    static OUPath constant(double value, double sigma, double t_min, double t_max, double dt);

    double sigma() const { return sigma_; }
    double dt() const { return dt_; }
    std::int64_t first_index() const { return first_index_; }
    std::int64_t last_index() const {
        return first_index_ + static_cast<std::int64_t>(z_.size()) - 1;
    }
    double t_min() const { return static_cast<double>(first_index_) * dt_; }
    double t_max() const { return static_cast<double>(last_index()) * dt_; }
    double time_at(std::int64_t index) const { return static_cast<double>(index) * dt_; }
    std::span<const double> values() const { return z_; }
    std::size_t size() const { return z_.size(); }

    double at_index(std::int64_t index) const;
    /// Linear interpolation between grid points; throws PathCoverageError
    /// outside [t_min, t_max].
    double at(double t) const;
    bool covers(double a, double b) const;

    /// Exact integral of the piecewise-linear interpolant over [a, b].
    double integral(double a, double b) const;

    /// The same values relabelled as t -> z(t + s), i.e. the OU path of theta_s omega.
    OUPath relabeled(double s) const;

private:
    double sigma_;
    std::int64_t first_index_;
    double dt_;
    std::vector<double> z_;
};

/// Exact one-step OU recursion z_{n+1} = e^{-sigma dt} z_n + eta_n with
/// eta_n = dW_n sqrt((1 - e^{-2 sigma dt}) / (2 sigma dt)).
std::vector<double> ou_exact_recursion(double z0, double sigma, double dt,
                                       std::span<const double> wiener_increments);

/// Stationary OU path driven by w's increments. z at t_min is drawn from
/// N(0, 1/(2 sigma)) on the auxiliary stream of w's seed unless z_initial is
/// given.
OUPath ou_from_wiener(const WienerPath& w, double sigma,
                      std::optional<double> z_initial = std::nullopt);

struct OUReport {
    double sigma = 0.0;
    double horizon = 0.0;          // t_max of the path
    bool horizon_ok = false;       // horizon >= 100 / sigma
    double ergodic_average = 0.0;  // (1/t) int_0^t z at t = horizon
    double max_growth_ratio = 0.0; // max |z(t)| / (1 + |t|)
    double decay_time = 0.0;       // t used for the backward decay check
    double delta = 0.0;
    double backward_decay = 0.0;   // e^{-delta t} |z(-t)|
    double second_moment = 0.0;    // sample mean of z^2 over the whole path
    double second_moment_target = 0.0;  // 1 / (2 sigma)
};

/// Ergodic and growth diagnostics of a stationary OU path. decay_time defaults
/// to min(100, |t_min|).
OUReport ou_property_report(const OUPath& z, double delta = 0.1,
                            std::optional<double> decay_time = std::nullopt);

/// E|z|^xi = Gamma((1 + xi)/2) / sqrt(pi sigma^xi) for the stationary law.
double ou_absolute_moment(double sigma, double xi);

}  // namespace snslab::noise
