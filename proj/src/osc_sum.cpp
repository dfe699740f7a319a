#include "pointint/osc_sum.hpp"

#include <cstdlib>
#include <cstring>

namespace pint {

void osc_sum_scalar(std::span<const double> t, std::span<const cplx> w, double x0, double dx, double sigma,
                    std::span<cplx> out) {
  for (std::size_t p = 0; p < t.size(); ++p) {
    cplx acc = 0.0;
    for (std::size_t m = 0; m < w.size(); ++m) {
      const double phase = sigma * t[p] * (x0 + static_cast<double>(m) * dx);
      acc += w[m] * cplx(std::cos(phase), std::sin(phase));
    }
    out[p] = acc;
  }
}

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

SimdPath simd_path() {
  static const SimdPath path = [] {
    const char* env = std::getenv("POINTINT_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return SimdPath::scalar;
    return avx2_available() ? SimdPath::avx2 : SimdPath::scalar;
  }();
  return path;
}

std::string_view simd_path_name(SimdPath p) { return p == SimdPath::avx2 ? "avx2" : "scalar"; }

void osc_sum(std::span<const double> t, std::span<const cplx> w, double x0, double dx, double sigma,
             std::span<cplx> out) {
  if (out.size() != t.size()) throw ValidationError("osc_sum: output size mismatch");
  if (simd_path() == SimdPath::avx2)
    detail::osc_sum_avx2(t, w, x0, dx, sigma, out);
  else
    osc_sum_scalar(t, w, x0, dx, sigma, out);
}

}  // namespace pint
