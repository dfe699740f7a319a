#include "pointint/lattice.hpp"

#include <cstring>
#include <memory>
#include <mutex>

#include <fftw3.h>

namespace pint {

namespace {

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

// Planner calls are serialised; execution is thread-safe.
class FftPlan {
 public:
  FftPlan(std::size_t n, int sigma) : n_(n), buf_(fftw_alloc_complex(n)) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf_.get(), buf_.get(), sigma < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                             FFTW_ESTIMATE);
  }
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  cplx* data() { return reinterpret_cast<cplx*>(buf_.get()); }
  void run() { fftw_execute(plan_); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  FftwBuffer buf_;
  fftw_plan plan_;
};

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(std::vector<cplx>& data, int sigma) {
  FftPlan plan(data.size(), sigma);
  std::memcpy(plan.data(), data.data(), data.size() * sizeof(cplx));
  plan.run();
  std::memcpy(data.data(), plan.data(), data.size() * sizeof(cplx));
}

std::vector<cplx> staggered_dft(std::span<const cplx> in, std::size_t N, int sigma) {
  if (in.size() > N || next_pow2(N) != N) throw ValidationError("staggered_dft: bad transform size");
  FftPlan plan(N, sigma);
  cplx* buf = plan.data();
  const double s = sigma < 0 ? -1.0 : 1.0;
  const double base = s * pi / static_cast<double>(N);
  for (std::size_t j = 0; j < N; ++j) {
    buf[j] = j < in.size() ? in[j] * std::polar(1.0, base * static_cast<double>(j)) : cplx(0.0);
  }
  plan.run();
  std::vector<cplx> out(N);
  for (std::size_t m = 0; m < N; ++m) out[m] = buf[m] * std::polar(1.0, base * (static_cast<double>(m) + 0.5));
  return out;
}

SpectralLattice::SpectralLattice(double h_, std::size_t n_r_, double dl_max) : h(h_), n_r(n_r_) {
  if (!(h > 0.0) || !(dl_max > 0.0) || n_r < 1) throw ValidationError("SpectralLattice: bad parameters");
  const double need = 2.0 * pi / (h * dl_max);
  n_fft = next_pow2(std::max<std::size_t>(2 * n_r, static_cast<std::size_t>(std::ceil(need))));
  dl = 2.0 * pi / (h * static_cast<double>(n_fft));
}

std::vector<cplx> SpectralLattice::to_lambda(std::span<const cplx> x, int sigma) const {
  auto y = staggered_dft(x, n_fft, sigma);
  y.resize(n_lambda());
  return y;
}

std::vector<cplx> SpectralLattice::to_r(std::span<const cplx> X, int sigma) const {
  auto y = staggered_dft(X, n_fft, sigma);
  y.resize(n_r);
  return y;
}

std::vector<cplx> sinc_hilbert(std::span<const cplx> g, Parity parity) {
  const std::size_t n = g.size();
  const std::size_t M = next_pow2(4 * n);
  // extended lattice index l = j - n covers -n .. n-1
  std::vector<cplx> v(M, 0.0), k(M, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    v[n + i] = g[i];
    const cplx mirrored = parity == Parity::odd ? -g[i] : (parity == Parity::even ? g[i] : cplx(0.0));
    v[n - 1 - i] = mirrored;
  }
  for (std::size_t d = 1; d < 2 * n; d += 2) {
    const double kd = 2.0 / (pi * static_cast<double>(d));
    k[d] = kd;
    k[M - d] = -kd;
  }
  fft_inplace(v, -1);
  fft_inplace(k, -1);
  for (std::size_t i = 0; i < M; ++i) v[i] *= k[i];
  fft_inplace(v, +1);
  std::vector<cplx> out(n);
  const double norm = 1.0 / static_cast<double>(M);
  for (std::size_t i = 0; i < n; ++i) out[i] = v[n + i] * norm;
  return out;
}

}  // namespace pint
