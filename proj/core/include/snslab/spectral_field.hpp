#pragma once

// Divergence-free, zero-mean velocity fields on the 2*pi-periodic torus,
// stored as Fourier coefficients in the real-to-complex half layout:
// index ix in [0, N) maps to k_x (wrapped to [-N/2+1, N/2]) and iky in
// [0, N/2] is k_y >= 0. Modes with k_y < 0 are implied by Hermitian symmetry.
//
// Convention: u(x) = sum_k u_k e^{i k.x}. Nyquist rows and columns are kept at
// zero.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace snslab {

using cplx = std::complex<double>;

class SpectralField {
public:
    SpectralField() = default;
    /// Zero field on an n x n grid (n even, >= 4).
    explicit SpectralField(int n);

    int n() const { return n_; }
    int nky() const { return n_ / 2 + 1; }
    std::size_t modes() const { return static_cast<std::size_t>(n_) * nky(); }

    cplx& at(int comp, int ix, int iky) { return data_[index(comp, ix, iky)]; }
    const cplx& at(int comp, int ix, int iky) const { return data_[index(comp, ix, iky)]; }

    /// Contiguous coefficients of one component (length modes()).
    std::span<cplx> component(int comp) { return {data_.data() + comp * modes(), modes()}; }
    std::span<const cplx> component(int comp) const {
        return {data_.data() + comp * modes(), modes()};
    }
    std::span<cplx> raw() { return data_; }
    std::span<const cplx> raw() const { return data_; }

    int kx(int ix) const { return ix <= n_ / 2 ? ix : ix - n_; }
    int ky(int iky) const { return iky; }
    bool nyquist(int ix, int iky) const { return ix == n_ / 2 || iky == n_ / 2; }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    /// this += a * x
    SpectralField& axpy(double a, const SpectralField& x);

    bool same_grid(const SpectralField& o) const { return n_ == o.n_; }
    void require_same_grid(const SpectralField& o, const char* where) const;

private:
    std::size_t index(int comp, int ix, int iky) const {
        return static_cast<std::size_t>(comp) * modes() + static_cast<std::size_t>(ix) * nky() +
               static_cast<std::size_t>(iky);
    }

    int n_ = 0;
    std::vector<cplx> data_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Physical velocity on the n x n grid, row-major [ix][iy] with x_i = 2*pi*i/n.
struct PhysicalField {
    int n = 0;
    std::vector<double> u1;
    std::vector<double> u2;
};

PhysicalField to_physical(const SpectralField& u);
/// Transform physical values back and Leray-project (also zeroes Nyquist modes).
SpectralField from_physical(const PhysicalField& p);

/// Restore exact Hermitian symmetry on the k_y = 0 column and clear k = 0 and
/// Nyquist modes.
void enforce_reality(SpectralField& u);

/// Max over modes of |k.u_k| / (|k||u_k|) (0 for the zero field).
double divergence_defect(const SpectralField& u);
/// Max deviation from Hermitian symmetry on the k_y = 0 column, relative to the
/// largest coefficient.
double reality_defect(const SpectralField& u);

}  // namespace snslab
