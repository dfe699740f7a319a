#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pointint/core.hpp"
#include "pointint/field.hpp"
#include "pointint/gamma.hpp"

namespace pint {

struct ResolventOptions {
  double h = 0.005;            // radial step of the 1-D reductions
  double tail_tol = 1e-14;     // integrands are cut where e^{-Im z rho} |M| falls below this
  RadialGrid anchor_grid{40.0, 8000};  // grid of the anchored e^{i z r} / (4 pi r) pieces
};

// (R0(z^2) u)(x) = int G_z(x - y) u(y) dy = int_0^inf rho e^{i z rho} M_u(x; rho) d rho,
// with M_u(x; .) the spherical mean of u about x. Requires Im z >= 0 (real z is the +i0 limit).
std::vector<cplx> free_resolvent_apply(const ScalarField& u, cplx z, std::span<const Vec3> where,
                                       const ResolventOptions& opt = {});
cplx free_resolvent_at(const ScalarField& u, cplx z, const Vec3& x, const ResolventOptions& opt = {});

// Throws NumericalError (carrying det and condition number) when |det Gamma(z)| is below
// 1e-10 times the product of row norms.
void check_off_poles(const GammaMatrix& g);

struct ResolventResult {
  CentredField field;  // free part R0 u (evaluated lazily) + anchored q_j e^{i z r} / (4 pi r)
  CVector charges;     // q = Gamma(z)^{-1} (R0 u)(y_k)
};

// R_{alpha,Y}(z^2) u = R0 u + sum_jk Gamma(z)^{-1}_jk G_z^{y_j} <conj G_z^{y_k}, u>.
ResolventResult resolvent_apply(const Configuration& cfg, cplx z, const ScalarField& u,
                                const ResolventOptions& opt = {});

struct DomainElement {
  cplx z;
  ScalarField phi;
  CVector charges;
  CentredField psi;  // phi + sum_j q_j G_z^{y_j}
};

// q = Gamma(z)^{-1} (phi(y_1), ..., phi(y_N)).
DomainElement domain_element_build(const Configuration& cfg, cplx z, const ScalarField& phi,
                                   const RadialGrid& grid = {40.0, 8000});

// Fits the spherical mean of psi about y_j to A / r + B on geometric nodes in the window and
// returns |B - alpha_j q| / max(|q|, floor) with q = 4 pi A.
double bethe_peierls_residual(const CentredField& psi, const Configuration& cfg, std::size_t j,
                              std::pair<double, double> window, double floor = 1e-12);

struct AbelResult {
  cplx value;                       // extrapolated to eps = 0
  std::vector<double> eps;
  std::vector<cplx> sequence;       // P(eps) for each eps
  double extrapolation_change = 0;  // |last two extrapolants| / |value|
};

struct AbelOptions {
  std::size_t t_order = 16;
  double t_positive_max = 0.0;  // 0: chosen from the decay of the spherical-mean transforms
  double t_negative_max = 300.0;
  std::size_t angular_order = 32;
  double accept = 1e-4;  // relative agreement of the last two extrapolants
};

// P(eps) = <u, v> + (1/(2 pi i)) int_R sum_jk Gamma(k)^{-1}_jk a_j b_k d lambda, k = sqrt(lambda + i eps),
//   a_j = int (e^{i k r} - e^{-i conj(k) r}) conj(g_u^{(j)}(r)) dr,  b_k = int e^{i k r} g_v^{(k)}(r) dr,
// g^{(j)} = r M^{(j)} the reduced spherical mean about y_j. This is the eps-regularised
// (eps/pi) int <R0(lambda + i eps) u, R(lambda + i eps) v> d lambda after the free part is
// integrated exactly. Extrapolated to eps = 0 by interpolation in
// {1, eps, eps log eps, eps^1.5, eps^2, eps^2 log eps}; 2 to 6 eps values.
AbelResult abel_pairing_oracle(const Configuration& cfg, const ScalarField& u, const ScalarField& v,
                               std::span<const double> eps_schedule, const AbelOptions& opt = {});

}  // namespace pint
