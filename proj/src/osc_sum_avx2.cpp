#include "pointint/osc_sum.hpp"

#include <algorithm>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif

namespace pint::detail {

#if defined(__AVX2__) && defined(__FMA__)

namespace {
constexpr std::size_t kReseed = 64;

struct Lanes {
  alignas(32) double v[4];
};
}  // namespace

void osc_sum_avx2(std::span<const double> t, std::span<const cplx> w, double x0, double dx, double sigma,
                  std::span<cplx> out) {
  const std::size_t np = t.size();
  const std::size_t nm = w.size();
  const std::size_t full = np - np % 4;

  for (std::size_t p = 0; p < full; p += 4) {
    Lanes rot_re, rot_im, z_re, z_im;
    for (int l = 0; l < 4; ++l) {
      const double step = sigma * t[p + l] * dx;
      rot_re.v[l] = std::cos(step);
      rot_im.v[l] = std::sin(step);
    }
    const __m256d r_re = _mm256_load_pd(rot_re.v);
    const __m256d r_im = _mm256_load_pd(rot_im.v);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();

    for (std::size_t m0 = 0; m0 < nm; m0 += kReseed) {
      for (int l = 0; l < 4; ++l) {
        const double phase = sigma * t[p + l] * (x0 + static_cast<double>(m0) * dx);
        z_re.v[l] = std::cos(phase);
        z_im.v[l] = std::sin(phase);
      }
      __m256d zr = _mm256_load_pd(z_re.v);
      __m256d zi = _mm256_load_pd(z_im.v);
      const std::size_t m1 = std::min(nm, m0 + kReseed);
      for (std::size_t m = m0; m < m1; ++m) {
        const __m256d wr = _mm256_set1_pd(w[m].real());
        const __m256d wi = _mm256_set1_pd(w[m].imag());
        acc_re = _mm256_fmadd_pd(wr, zr, acc_re);
        acc_re = _mm256_fnmadd_pd(wi, zi, acc_re);
        acc_im = _mm256_fmadd_pd(wr, zi, acc_im);
        acc_im = _mm256_fmadd_pd(wi, zr, acc_im);
        const __m256d nr = _mm256_fmsub_pd(zr, r_re, _mm256_mul_pd(zi, r_im));
        const __m256d ni = _mm256_fmadd_pd(zr, r_im, _mm256_mul_pd(zi, r_re));
        zr = nr;
        zi = ni;
      }
    }
    Lanes ar, ai;
    _mm256_store_pd(ar.v, acc_re);
    _mm256_store_pd(ai.v, acc_im);
    for (int l = 0; l < 4; ++l) out[p + l] = cplx(ar.v[l], ai.v[l]);
  }
  if (full < np)
    osc_sum_scalar(t.subspan(full), w, x0, dx, sigma, out.subspan(full));
}

#else

void osc_sum_avx2(std::span<const double> t, std::span<const cplx> w, double x0, double dx, double sigma,
                  std::span<cplx> out) {
  osc_sum_scalar(t, w, x0, dx, sigma, out);
}

#endif

}  // namespace pint::detail
