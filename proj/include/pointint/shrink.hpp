#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pointint/core.hpp"

namespace pint {

// Real radial potential V(|x|), zero beyond `support`.
struct RadialPotential {
  std::function<double(double)> V;
  double support = 1.0;
  double decay = std::numeric_limits<double>::infinity();  // delta in |V(x)| <= C <x>^-delta
  std::vector<double> breaks;                              // interior radii where V is not smooth

  double operator()(double r) const { return r < support ? V(r) : 0.0; }

  static RadialPotential square_well(double depth, double radius);
  // Cubic spline through (r_i, V_i); r must be increasing with r_0 >= 0. Zero beyond r.back().
  static RadialPotential sampled(std::vector<double> r, std::vector<double> values);
};

// Depth that puts the first s-wave zero-energy resonance at the given radius: -(pi / 2 radius)^2.
double tuned_well_depth(double radius);

struct ResonanceData {
  RadialProfile phi;        // phi(r) on [0, support]
  double tail = 0.0;        // phi(r) = tail / r for r >= support
  double a = 0.0;           // int V phi d^3x > 0
  double norm_check = 0.0;  // int V phi^2 d^3x, -1 by construction
  double mismatch = 0.0;    // support u'(support) / u(support) for u = r phi
  double support = 0.0;

  double operator()(double r) const;
};

struct ShrinkOptions {
  std::size_t panels = 8;        // Nystrom panels on the support (breaks are added)
  std::size_t order = 16;        // Gauss-Legendre nodes per panel
  double resonance_tol = 1e-7;   // accepted |mismatch|
  std::size_t phi_nodes = 4000;  // samples of phi on [0, support]
};

// Zero-energy radial solution by outward integration, normalised so that int V phi^2 = -1 and
// int V phi > 0. Throws NumericalError when u'(support) does not vanish (no resonance).
ResonanceData resonance_function(const RadialPotential& V, const ShrinkOptions& opt = {});

// Radial function of |x| with its spatial extent and the radius of its Fourier support (beyond
// which the transform is below 1e-17 of its peak).
struct RadialInput {
  std::function<cplx(double)> f;
  double extent = 1.0;
  double band = 1.0;
};

RadialInput radial_gaussian(cplx amp, double b);  // amp e^{-b r^2}
// (U_s u)(x) = s^{-3/2} u(x / s). U_s^* = U_{1/s}.
RadialInput dilate(const RadialInput& u, double s);
double radial_l2(const RadialInput& u);
cplx radial_inner(const RadialInput& u, const RadialInput& v);  // int conj(u) v d^3x

// (G0(mu) h)(r) for radial h, mu with Im mu >= 0, kernel e^{i mu |x-y|} / (4 pi |x-y|) averaged over
// angles: r (G0 h)(r) = int_0^inf e^{i mu r_>} sin(mu r_<) / mu r' h(r') dr'.
std::vector<cplx> s_wave_free_apply(cplx mu, const RadialInput& h, std::span<const double> r);

// Dense Nystrom discretisation of 1 + G0(mu) V on the support of V, acting on reduced functions
// x(r) = r psi(r). The kernel kink at r' = r is handled by splitting the panel that contains r.
class LsSystem {
 public:
  LsSystem(const RadialPotential& V, cplx mu, const ShrinkOptions& opt = {});

  std::span<const double> nodes() const { return t_; }
  std::span<const double> weights() const { return w_; }
  std::span<const double> potential() const { return v_; }
  cplx mu() const { return mu_; }

  // Reduced solution x at the nodes for right-hand side r f(r) given at the nodes as f.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& f) const;
  // (G0(mu) V psi)(r) from reduced x at the nodes.
  cplx apply_g0v(const Eigen::VectorXcd& x, double r) const;
  double rcond() const { return rcond_; }

 private:
  // Row c with sum_j c_j x_j = int_0^support K(r, s) V(s) x(s) ds.
  void kernel_row(double r, std::span<cplx> row) const;
  cplx kernel(double r, double s) const;

  RadialPotential V_;
  cplx mu_;
  std::size_t order_;
  std::vector<double> edges_;
  std::vector<double> t_, w_, v_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  double rcond_ = 0.0;
};

// (1 + G0(mu) V)^{-1} f on f's grid. Throws NumericalError if the discrete system is singular.
RadialProfile ls_resolvent_apply(const RadialPotential& V, cplx mu, const RadialProfile& f,
                                 const ShrinkOptions& opt = {});

struct RankOneOptions {
  std::size_t probes = 12;
  double s_min = 0.3;
  double s_max = 40.0;
  double jitter = 0.05;
  std::uint64_t seed = 1;
  double r_far = 4000.0;
  ShrinkOptions shrink{};
  // When set, also report || eps^{1/2} G0(+-eps lambda) U_eps^* u - <conj G_{+-lambda}, u> 1 ||_{-beta}.
  std::optional<RadialInput> diagnostic_input;
};

struct RankOneCurve {
  double lambda = 0.0;
  double beta = 0.0;
  double a = 0.0;
  std::vector<double> eps;
  std::vector<double> residual;     // weighted operator-norm distance to the rank-one limit
  double target_norm = 0.0;         // norm of the rank-one limit on the probe span
  bool strictly_decreasing = true;  // false flags a non-decreasing step
  std::vector<double> diagnostic_plus, diagnostic_minus;
};

// Distance in B(L^2_{-beta}) between eps (1 + G0(-eps lambda) V)^{-1} and
// (4 pi i / (lambda a^2)) |phi><V phi|, estimated on the span of b_m = <r>^beta e^{-(r/s_m)^2}.
RankOneCurve rank_one_limit_check(const RadialPotential& V, double lambda, std::span<const double> eps_list,
                                  double beta = 2.0, const RankOneOptions& opt = {});

struct PairingOptions {
  std::size_t lambda_panels = 32;
  std::size_t lambda_order = 16;
  double quadrature_tol = 1e-6;  // relative, between orders 16 and 12 of the lambda rule
  std::size_t input_panels = 64;
  ShrinkOptions shrink{};
};

struct PairingResult {
  cplx value;                   // <W_eps^+ u, v>
  cplx base;                    // <u, v>
  double quadrature_error = 0.0;
  std::vector<double> lambda;   // quadrature nodes
  std::vector<cplx> integrand;  // at the nodes
};

// <W_eps^+ u, v> for W_eps^+ the wave operator of -Delta + eps^-2 V(x / eps), from
//   <u, v> + (eps^2 / i pi) int_0^R <(1 + G0(-eps l) V)^{-1} (G0(eps l) - G0(-eps l)) U_eps^* u,
//                                    V G0(eps l) U_eps^* v> l dl,
// R the band of u. eps = 1 gives the unscaled stationary pairing of V.
PairingResult weps_pairing(const RadialPotential& V, double eps, const RadialInput& u, const RadialInput& v,
                           const PairingOptions& opt = {});
// The same integrand at one lambda.
cplx weps_integrand(const RadialPotential& V, double eps, const RadialInput& u, const RadialInput& v, double lambda,
                    const ShrinkOptions& opt = {});

// The eps -> 0 limit: <u, v> + 4 int_0^inf (int conj(u) (G_l - G_{-l})) (int G_l v) dl,
// G_l = e^{i l |x|} / (4 pi |x|). Equal to <W+ u, v> for one centre at the origin with alpha = 0.
cplx limit_pairing(const RadialInput& u, const RadialInput& v, const PairingOptions& opt = {});

}  // namespace pint
