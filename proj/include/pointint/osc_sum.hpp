#pragma once

#include <span>
#include <string_view>

#include "pointint/core.hpp"

namespace pint {

// out[p] = sum_m w[m] exp(i sigma t[p] (x0 + m dx))
//
// The workhorse behind off-lattice half-line Fourier transforms and the
// free-propagator kernel. The scalar version evaluates every phase with
// sincos and is the reference; the AVX2 version walks the phase with a
// rotation recurrence, four targets per register, reseeded every 64 terms.
void osc_sum(std::span<const double> t, std::span<const cplx> w, double x0, double dx, double sigma,
             std::span<cplx> out);

void osc_sum_scalar(std::span<const double> t, std::span<const cplx> w, double x0, double dx, double sigma,
                    std::span<cplx> out);

enum class SimdPath { scalar, avx2 };

// Detected once; POINTINT_SIMD=scalar in the environment forces the reference path.
SimdPath simd_path();
std::string_view simd_path_name(SimdPath p);
bool avx2_available();

namespace detail {
void osc_sum_avx2(std::span<const double> t, std::span<const cplx> w, double x0, double dx, double sigma,
                  std::span<cplx> out);
}

}  // namespace pint
