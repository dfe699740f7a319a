#pragma once

#include <span>
#include <vector>

#include "pointint/core.hpp"

namespace pint {

// out_m = sum_j in_j exp(sigma 2 pi i (m + 1/2)(j + 1/2) / N), m < N, with `in` zero-padded to N.
// N must be a power of two >= in.size(). sigma is +1 or -1.
std::vector<cplx> staggered_dft(std::span<const cplx> in, std::size_t N, int sigma);

// Plain complex FFT, forward sign -1 (unnormalised).
void fft_inplace(std::vector<cplx>& data, int sigma);

std::size_t next_pow2(std::size_t n);

// Paired staggered lattices r_i = (i + 1/2) h and lambda_m = (m + 1/2) dl with h dl = 2 pi / N,
// so that the oscillatory sums between them are one FFT each.
struct SpectralLattice {
  double h = 0.0;
  double dl = 0.0;
  std::size_t n_r = 0;
  std::size_t n_fft = 0;

  // Chooses the smallest power of two N >= 2 n_r with dl <= dl_max.
  SpectralLattice(double h, std::size_t n_r, double dl_max);

  double r(std::size_t i) const { return (static_cast<double>(i) + 0.5) * h; }
  double lambda(std::size_t m) const { return (static_cast<double>(m) + 0.5) * dl; }
  // Lambda nodes below the Nyquist frequency pi / h.
  std::size_t n_lambda() const { return n_fft / 2; }

  // Y_m = sum_i x_i exp(sigma i lambda_m r_i), m < n_lambda.
  std::vector<cplx> to_lambda(std::span<const cplx> x, int sigma) const;
  // y_i = sum_m X_m exp(sigma i lambda_m r_i), i < n_r.
  std::vector<cplx> to_r(std::span<const cplx> X, int sigma) const;
};

// Discrete sinc-Hilbert transform of staggered half-line samples extended by parity:
//   (H g)_k = (2/pi) sum_{k - m odd} g_m / (k - m)
// over the full extended lattice. Exact for band-limited data; evaluated as a
// zero-padded linear convolution, so nothing is periodised.
std::vector<cplx> sinc_hilbert(std::span<const cplx> g, Parity parity);

}  // namespace pint
