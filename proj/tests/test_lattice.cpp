#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pointint/lattice.hpp"

using namespace pint;

namespace {

std::vector<cplx> random_vec(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("next_pow2") {
  CHECK(next_pow2(1) == 1);
  CHECK(next_pow2(5) == 8);
  CHECK(next_pow2(64) == 64);
}

TEST_CASE("FFT round trip and direct DFT") {
  const auto x = random_vec(32, 1);
  auto y = x;
  fft_inplace(y, -1);
  std::vector<cplx> d(32);
  for (std::size_t k = 0; k < 32; ++k)
    for (std::size_t j = 0; j < 32; ++j) d[k] += x[j] * std::exp(-2.0 * pi * I * double(j * k) / 32.0);
  CHECK(max_diff(y, d) < 1e-12);
  fft_inplace(y, +1);
  for (auto& v : y) v /= 32.0;
  CHECK(max_diff(y, x) < 1e-13);
}

TEST_CASE("staggered DFT against the defining sum") {
  const auto x = random_vec(20, 2);
  for (int sigma : {1, -1}) {
    const auto y = staggered_dft(x, 64, sigma);
    REQUIRE(y.size() == 64);
    std::vector<cplx> d(64);
    for (std::size_t m = 0; m < 64; ++m)
      for (std::size_t j = 0; j < x.size(); ++j)
        d[m] += x[j] * std::exp(double(sigma) * 2.0 * pi * I * (m + 0.5) * (j + 0.5) / 64.0);
    CHECK(max_diff(y, d) < 1e-12);
  }
}

TEST_CASE("spectral lattice transforms match direct oscillatory sums") {
  const SpectralLattice L(0.05, 40, 0.3);
  CHECK(L.n_fft >= 80);
  CHECK(L.dl <= 0.3);
  CHECK(L.h * L.dl * double(L.n_fft) == doctest::Approx(2.0 * pi));
  const auto x = random_vec(40, 3);
  const auto Y = L.to_lambda(x, 1);
  REQUIRE(Y.size() == L.n_lambda());
  std::vector<cplx> d(L.n_lambda());
  for (std::size_t m = 0; m < d.size(); ++m)
    for (std::size_t i = 0; i < 40; ++i) d[m] += x[i] * std::exp(I * L.lambda(m) * L.r(i));
  CHECK(max_diff(Y, d) < 1e-11);
  const auto X = random_vec(L.n_lambda(), 4);
  const auto y = L.to_r(X, -1);
  REQUIRE(y.size() == 40);
  std::vector<cplx> e(40);
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t m = 0; m < X.size(); ++m) e[i] += X[m] * std::exp(-I * L.lambda(m) * L.r(i));
  CHECK(max_diff(y, e) < 1e-11);
}

TEST_CASE("sinc-Hilbert transform against the O(n^2) sum") {
  const auto g = random_vec(37, 5);
  for (Parity p : {Parity::even, Parity::odd, Parity::none}) {
    const double s = p == Parity::even ? 1.0 : (p == Parity::odd ? -1.0 : 0.0);
    // extended lattice: index l >= 0 holds g_l, index -1 - l holds s g_l
    auto ext = [&](long l) { return l >= 0 ? g[std::size_t(l)] : s * g[std::size_t(-1 - l)]; };
    const auto H = sinc_hilbert(g, p);
    std::vector<cplx> d(g.size());
    const long n = long(g.size());
    for (long k = 0; k < n; ++k)
      for (long m = -n; m < n; ++m)
        if ((k - m) % 2 != 0) d[std::size_t(k)] += 2.0 / pi * ext(m) / double(k - m);
    CHECK(max_diff(H, d) < 1e-12);
  }
}
