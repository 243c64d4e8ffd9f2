#pragma once

#include <complex>

namespace snslab::fft {

// Real 2D transforms on an n x n periodic grid using the r2c half layout
// n x (n/2 + 1). Plans and scratch buffers are thread-local, so concurrent
// callers never share mutable state.

/// Physical (row-major [ix][iy]) to coefficients, normalized by 1/n^2 so that
/// u(x) = sum_k c_k e^{i k.x}.
void forward(int n, const double* physical, std::complex<double>* spectral);

/// Coefficients to physical values (unnormalized synthesis). The input is not
/// modified.
void backward(int n, const std::complex<double>* spectral, double* physical);

}  // namespace snslab::fft
