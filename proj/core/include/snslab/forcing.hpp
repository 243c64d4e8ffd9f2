#pragma once

#include <vector>

#include "snslab/spectral_field.hpp"

namespace snslab {

enum class ForcingKind {
    Example,   // f(t) = (e^t + 1) f0, f_inf = f0
    Constant,  // f(t) = f0
    Table,     // f(t) = a(t) f0 with a piecewise linear, constant outside the table
};

/// Time-dependent body force of the separable form a(t) * f0.
class Forcing {
public:
    Forcing() = default;
    static Forcing example(SpectralField f0);
    static Forcing constant(SpectralField f0);
    static Forcing table(SpectralField f0, std::vector<double> times, std::vector<double> amplitudes);
    /// f = 0 on an n x n grid.
    static Forcing zero(int n);

    ForcingKind kind() const { return kind_; }
    const SpectralField& shape() const { return f0_; }
    double amplitude(double t) const;
    /// Limit of a(t) as t -> -infinity (the autonomous amplitude).
    double amplitude_infinity() const;

    SpectralField at(double t) const;
    double norm_sq_at(double t) const { return amplitude(t) * amplitude(t) * shape_norm_sq_; }
    double shape_norm_sq() const { return shape_norm_sq_; }
    bool is_zero() const { return shape_norm_sq_ == 0.0; }

    /// The constant forcing f_inf.
    Forcing autonomous() const;

    /// int_{-inf}^{tau} |f(t) - f_inf|^2 dt (closed form for Example, quadrature
    /// for Table, 0 for Constant).
    double tail_integral(double tau) const;

private:
    ForcingKind kind_ = ForcingKind::Constant;
    SpectralField f0_;
    double shape_norm_sq_ = 0.0;
    std::vector<double> times_;
    std::vector<double> amps_;
};

/// sup_{s <= tau} int_{-inf}^{s} e^{gamma (xi - s)} |f(xi)|^2 dxi by trapezoidal
/// quadrature with step h, truncated where e^{-gamma L} < 1e-12, and the sup over a
/// grid of s values spaced ds reaching back `span`.
double tempered_F_quadrature(const Forcing& f, double gamma, double tau, double h = 1e-3,
                             double ds = 0.25, double span = 20.0);

/// Closed form of the same quantity for the Example kind.
double tempered_F_example(double f0_norm_sq, double gamma, double tau);

}  // namespace snslab
