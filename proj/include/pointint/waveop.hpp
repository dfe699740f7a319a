#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "pointint/core.hpp"
#include "pointint/field.hpp"
#include "pointint/gamma.hpp"
#include "pointint/lattice.hpp"

namespace pint {

enum class Sign { plus, minus };

struct TranslationOp {
  Vec3 offset{};
  Vec3 apply_to_point(const Vec3& x) const { return x + offset; }
  ScalarField apply(const ScalarField& f) const { return f.translated(offset); }
  CentredField apply(const CentredField& f) const { return f.translated(offset); }
  TranslationOp then(const TranslationOp& o) const { return {offset + o.offset}; }
  TranslationOp inverse() const { return {-1.0 * offset}; }
};

struct WaveOptions {
  // Lambda lattice spacing dl <= lattice_factor / (2 r_max + max d_jk).
  double lattice_factor = 0.5;
  // Forward transforms stop where every |S_k| falls below this fraction of its peak.
  double spectral_cut = 1e-15;
  // Raised-cosine taper over this outer fraction of the reduced means before transforming.
  double taper = 0.1;
};

// The stationary wave operator W+ and its adjoint for one configuration on one radial grid.
//
// Reduced means g_k = r M_u about each centre are transformed on a staggered lambda
// lattice paired with the grid (one FFT per transform). The multiplier is split as
// F = -4 pi i + F~: the constant part becomes -(g - i H g) through the discrete Hilbert
// transform, and only the decaying remainder F~ is integrated in lambda. Values at the
// origin of the reduced means are peeled off against e^{-r^2}, whose transforms are known
// in closed form, so the sampled remainder is continuous under odd extension.
class WaveOperator {
 public:
  WaveOperator(Configuration cfg, RadialGrid grid, WaveOptions opt = {});

  const Configuration& config() const { return cfg_; }
  const RadialGrid& grid() const { return grid_; }
  const SpectralLattice& lattice() const { return lat_; }

  // W+ u (sign plus) or W- u = conj(W+ conj u).
  CentredField apply(const CentredField& u, Sign sign = Sign::plus) const;
  CentredField apply(const ScalarField& u, Sign sign = Sign::plus) const;
  // (W+)^* v or (W-)^* v.
  CentredField adjoint(const CentredField& v, Sign sign = Sign::plus) const;
  CentredField adjoint(const ScalarField& v, Sign sign = Sign::plus) const;

  // Reduced profiles rho (Omega_jk u)(y_j + rho w) for one pair.
  RadialProfile omega(std::size_t j, std::size_t k, const CentredField& u) const;

  // F~(lambda_m) = F + 4 pi i, row-major N x N per lattice node, computed on demand.
  const cplx* remainder_at(std::size_t m) const;

 private:
  struct Reduced {
    cplx g0, g1;
    RadialProfile rest;  // tapered, O(r^2) at 0
  };
  Reduced reduce(const CentredField& u, std::size_t k) const;
  std::vector<cplx> sine_coeffs(const Reduced& r) const;  // S(lambda_m), m < m_count
  std::vector<cplx> exp_coeffs(const Reduced& r) const;   // E(lambda_m), m < n_lambda
  std::vector<cplx> constant_forward(const Reduced& r) const;
  std::vector<cplx> constant_adjoint(const Reduced& r) const;
  void ensure_remainder(std::size_t m_count) const;
  std::vector<cplx> lambda_integral(std::vector<cplx> X, bool sine) const;
  // Contribution of lambda > L from the leading 1/lambda^2 term of the integrand, which comes
  // from the peeled origin values: F~ ~ (16 pi^2 / lambda) A(lambda), S, E ~ g0 / lambda.
  void add_tail(std::vector<cplx>& w, std::size_t j, const std::vector<Reduced>& red, double L, bool adjoint) const;
  CentredField apply_plus(const CentredField& u, const std::vector<bool>* pairs_mask) const;
  CentredField adjoint_plus(const CentredField& v) const;

  Configuration cfg_;
  RadialGrid grid_;
  WaveOptions opt_;
  SpectralLattice lat_;
  mutable std::mutex mu_;
  mutable std::vector<cplx> remainder_;  // n_computed * N * N
  mutable std::size_t remainder_count_ = 0;
};

// Convenience wrappers matching the operation list.
RadialProfile omega_apply(const Configuration& cfg, std::size_t j, std::size_t k, const ScalarField& u,
                          const RadialGrid& grid);
CentredField wave_apply(const Configuration& cfg, const ScalarField& u, Sign sign, const RadialGrid& grid);
CentredField wave_adjoint_apply(const Configuration& cfg, const ScalarField& v, Sign sign, const RadialGrid& grid);

// W+ u = u - M_u(|x|) + i (H (r M_u))(|x|) / |x| for one centre at the origin with alpha = 0.
CentredField resonant_closed_form(const Configuration& cfg, const ScalarField& u, const RadialGrid& grid);

}  // namespace pint
