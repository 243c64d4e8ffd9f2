#pragma once

#include <cstdint>
#include <vector>

#include "snslab/spectral_field.hpp"

namespace snslab {

/// (I - k k^T / |k|^2) per mode; drops k = 0 and Nyquist modes and restores
/// Hermitian symmetry on the k_y = 0 column.
SpectralField leray_project(SpectralField raw);

/// (u, w)_H = integral of u.w over the torus.
double inner_H(const SpectralField& u, const SpectralField& w);
double norm_H_sq(const SpectralField& u);
double norm_V_sq(const SpectralField& u);   // sum |k|^2 |u_k|^2 (times area)
double norm_DA_sq(const SpectralField& u);  // sum |k|^4 |u_k|^2 (times area)
double norm_H(const SpectralField& u);
double norm_V(const SpectralField& u);
double norm_DA(const SpectralField& u);

/// Stokes operator: u_k -> |k|^2 u_k.
SpectralField apply_A(const SpectralField& u);

/// Largest retained |k_x|, |k_y| under the two-thirds rule (3K < N).
int dealias_cutoff(int n);
/// Zero every mode with |k_x| > K or k_y > K.
void dealias(SpectralField& u);

/// P[(u.grad) v], pseudo-spectral with two-thirds dealiasing of inputs and output.
SpectralField nonlinear_B(const SpectralField& u, const SpectralField& v);
/// B(u, u) through the divergence form div(u (x) u): 5 transforms instead of 8.
SpectralField nonlinear_B(const SpectralField& u);
/// b(u, v, w) = (B(u, v), w)_H.
double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w);

/// Stokes eigenvalues on the torus, one entry per +-k pair of the half plane
/// (a two-dimensional real eigenspace each), sorted by |k|^2 with ties broken
/// lexicographically in (k_x, k_y).
class EigenOrdering {
public:
    explicit EigenOrdering(int n);

    int n() const { return n_; }
    /// Number of eigen-entries, ((N-1)^2 - 1) / 2.
    int size() const { return static_cast<int>(lambdas_.size()); }
    /// lambda_i for 1 <= i <= size().
    double lambda(int i) const;
    double lambda1() const { return lambdas_.front(); }
    /// 0-based rank of a stored mode, or -1 for k = 0 / Nyquist modes. Modes
    /// (k_x < 0, k_y = 0) share the rank of their mirror.
    int rank(int ix, int iky) const { return rank_[static_cast<std::size_t>(ix) * (n_ / 2 + 1) + iky]; }
    /// Smallest i with lambda_{i+1} >= target (so lambda_{i+1} ~ target).
    int index_before_lambda(double target) const;

private:
    int n_;
    std::vector<double> lambdas_;
    std::vector<int> rank_;
};

/// P_i u: keeps the i lowest entries of the ordering.
SpectralField project_P(const SpectralField& u, int i, const EigenOrdering& ord);
/// Q_i u = u - P_i u.
SpectralField residual_Q(const SpectralField& u, int i, const EigenOrdering& ord);

/// Taylor-Green field amplitude * (sin x cos y, -cos x sin y).
SpectralField taylor_green(int n, double amplitude = 1.0);
/// Real divergence-free single Fourier mode: 2 Re(a e^{i k.x}) k_perp / |k|
/// with k = (kx, ky) in the upper half plane.
SpectralField single_mode(int n, int kx, int ky, cplx a);
/// Shear mode (sin(k y), 0) for k > 0.
SpectralField shear_x(int n, int k, double amplitude = 1.0);
/// (sin(k y), sin(k x)) type forcing shapes.
SpectralField sin_pair(int n, int k, double amplitude = 1.0);

/// Seeded random dealiased field with spectrum ~ 1/(1 + |k|^2), scaled to the
/// requested H norm.
SpectralField random_field(int n, std::uint64_t seed, std::uint64_t stream, double h_norm);
/// Rescale to a given H norm (zero stays zero).
SpectralField with_norm_H(SpectralField u, double h_norm);

/// Grid quadrature of |u|^2 (for Parseval checks).
double grid_energy(const SpectralField& u);

/// Max over an oversampled grid (oversample * N points per side) of the
/// spectral norm of sym(grad u).
double max_sym_grad_norm(const SpectralField& u, int oversample = 4);

/// |b(u,v,w)| / (|u|_H^1/2 |u|_V^1/2 |v|_V |w|_H^1/2 |w|_V^1/2)
double b1_ratio(const SpectralField& u, const SpectralField& v, const SpectralField& w);
/// |b(u,v,w)| / (|u|_H^1/2 |u|_V^1/2 |v|_V^1/2 |Av|_H^1/2 |w|_H)
double b2_ratio(const SpectralField& u, const SpectralField& v, const SpectralField& w);

}  // namespace snslab
