#include "snslab/forcing.hpp"

#include <algorithm>
#include <cmath>

#include "snslab/errors.hpp"
#include "snslab/spectral_ops.hpp"

namespace snslab {

Forcing Forcing::example(SpectralField f0) {
    Forcing f;
    f.kind_ = ForcingKind::Example;
    f.shape_norm_sq_ = norm_H_sq(f0);
    f.f0_ = std::move(f0);
    return f;
}

Forcing Forcing::constant(SpectralField f0) {
    Forcing f;
    f.kind_ = ForcingKind::Constant;
    f.shape_norm_sq_ = norm_H_sq(f0);
    f.f0_ = std::move(f0);
    return f;
}

Forcing Forcing::table(SpectralField f0, std::vector<double> times, std::vector<double> amplitudes) {
    if (times.empty() || times.size() != amplitudes.size()) {
        throw ValidationError("forcing table: times and amplitudes must be nonempty and of equal length");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw ValidationError("forcing table: times must increase");
    }
    Forcing f;
    f.kind_ = ForcingKind::Table;
    f.shape_norm_sq_ = norm_H_sq(f0);
    f.f0_ = std::move(f0);
    f.times_ = std::move(times);
    f.amps_ = std::move(amplitudes);
    return f;
}

Forcing Forcing::zero(int n) { return constant(SpectralField(n)); }

double Forcing::amplitude(double t) const {
    switch (kind_) {
        case ForcingKind::Example:
            return std::exp(t) + 1.0;
        case ForcingKind::Constant:
            return 1.0;
        case ForcingKind::Table: {
            if (t <= times_.front()) return amps_.front();
            if (t >= times_.back()) return amps_.back();
            const auto it = std::upper_bound(times_.begin(), times_.end(), t);
            const std::size_t i = static_cast<std::size_t>(it - times_.begin());
            const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
            return (1.0 - w) * amps_[i - 1] + w * amps_[i];
        }
    }
    return 0.0;
}

double Forcing::amplitude_infinity() const {
    return kind_ == ForcingKind::Table ? amps_.front() : 1.0;
}

SpectralField Forcing::at(double t) const { return amplitude(t) * f0_; }

Forcing Forcing::autonomous() const { return constant(amplitude_infinity() * f0_); }

double Forcing::tail_integral(double tau) const {
    switch (kind_) {
        case ForcingKind::Example:
            return std::exp(2.0 * tau) * shape_norm_sq_ / 2.0;
        case ForcingKind::Constant:
            return 0.0;
        case ForcingKind::Table: {
            // a(t) - a_inf is piecewise linear; Simpson per segment is exact.
            const double a_inf = amps_.front();
            double total = 0.0;
            for (std::size_t i = 1; i < times_.size() && times_[i - 1] < tau; ++i) {
                const double t0 = times_[i - 1];
                const double t1 = std::min(times_[i], tau);
                const double d0 = amplitude(t0) - a_inf;
                const double d1 = amplitude(t1) - a_inf;
                const double dm = amplitude(0.5 * (t0 + t1)) - a_inf;
                total += (t1 - t0) / 6.0 * (d0 * d0 + 4.0 * dm * dm + d1 * d1);
            }
            if (tau > times_.back()) {
                const double d = amps_.back() - a_inf;
                total += d * d * (tau - times_.back());
            }
            return total * shape_norm_sq_;
        }
    }
    return 0.0;
}

double tempered_F_quadrature(const Forcing& f, double gamma, double tau, double h, double ds, double span) {
    if (!(gamma > 0.0) || !(h > 0.0)) throw ValidationError("tempered_F: gamma and h must be positive");
    const double length = std::log(1e12) / gamma;
    const auto steps = static_cast<long>(std::ceil(length / h));
    double best = 0.0;
    for (double s = tau; s >= tau - span - 1e-12; s -= ds) {
        double total = 0.0;
        for (long j = 0; j <= steps; ++j) {
            const double xi = s - static_cast<double>(j) * h;
            const double w = (j == 0 || j == steps) ? 0.5 : 1.0;
            total += w * std::exp(gamma * (xi - s)) * f.norm_sq_at(xi);
        }
        best = std::max(best, total * h);
    }
    return best;
}

double tempered_F_example(double f0_norm_sq, double gamma, double tau) {
    // Integrand (e^xi + 1)^2 grows with s, so the sup sits at s = tau.
    return f0_norm_sq * (std::exp(2.0 * tau) / (gamma + 2.0) + 2.0 * std::exp(tau) / (gamma + 1.0) + 1.0 / gamma);
}

}  // namespace snslab
