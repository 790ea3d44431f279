#pragma once

#include <complex>
#include <span>
#include <vector>

// Low-level periodic spectral calculus on uniform grids. Everything here
// works on raw sample vectors; parity-aware operations live in loop.hpp.

namespace orbits::spectral {

using cd = std::complex<double>;

// Forward DFT with 1/n normalization: c_k = (1/n) sum_j x_j e^{-2pi i jk/n}.
// Bucket k holds the signed frequency signed_freq(k, n).
std::vector<cd> dft(std::span<const cd> x);

// Inverse of dft: x_j = sum_k c_k e^{+2pi i jk/n}.
std::vector<cd> idft(std::span<const cd> c);

inline int signed_freq(int k, int n) { return 2 * k < n ? k : k - n; }

// Values at the nodes of the antiderivative F(tau) = int_0^tau f, built from
// the Fourier coefficients of f (Nyquist mode dropped). F[0] = 0 and the
// slope of the non-periodic part is the mean of f.
std::vector<double> cumulative(std::span<const double> f);

// Exact adjoint of `cumulative` with respect to the pairing
// (u, v) -> (1/n) sum_j u_j v_j, i.e. (u, cumulative(f)) = (cumulative_adjoint(u), f).
// Discrete counterpart of the tail integral tau -> int_tau^1 u.
std::vector<double> cumulative_adjoint(std::span<const double> u);

// int_0^1 s v(s) ds for periodic smooth v, via the Fourier series of v
// (spectrally accurate despite the sawtooth factor).
double first_moment(std::span<const double> v);

}  // namespace orbits::spectral
