#pragma once

#include <span>
#include <vector>

#include "pointint/core.hpp"
#include "pointint/field.hpp"
#include "pointint/norms.hpp"

namespace pint {

// Free evolution of the odd extension of a reduced profile w = rho phi under e^{i t d^2/dr^2},
// which is e^{-i t H0} on radial fields. |t| <= kernel_crossover: FFT multiplier e^{-i k^2 t} on a
// box wide enough that nothing wraps. Beyond: the 1-D kernel (4 pi i t)^{-1/2} e^{i (x-y)^2 / 4t}
// as an oscillatory sum. Throws NumericalError when the kernel sum would alias.
RadialProfile evolve_reduced(const RadialProfile& w, double t, const RadialGrid& out);

inline constexpr double kernel_crossover = 10.0;

// e^{-i t H0} u at the given points. Gaussian and dipole-Gaussian terms in closed form, radial
// terms through evolve_reduced about their centre, other terms through the spherical mean about
// each point: (4 pi i t)^{-3/2} int 4 pi rho^2 e^{i rho^2 / 4t} M_u(x; rho) d rho.
std::vector<cplx> free_propagate(const ScalarField& u, double t, std::span<const Vec3> where);

// e^{-i t H0} on a centred field. Gaussians stay Gaussians (complex width); anchored pieces and
// radial terms are evolved onto `out`; generic terms are evaluated lazily.
CentredField free_evolve(const CentredField& f, double t, const RadialGrid& out);
ScalarField free_evolve(const ScalarField& u, double t, const RadialGrid& out);

struct DynamicsOptions {
  RadialGrid grid{60.0, 6000};  // grid of the adjoint wave operator
  double kappa = 16.0;          // output grid reaches r_max + 2 kappa |t|
  double h_out = 0.03;          // output grid step for |t| > 1 (grid.h() below)
};

// Output grid used at time t.
RadialGrid propagation_grid(const DynamicsOptions& opt, double t);

// e^{-i t H} P_ac u = W+ e^{-i t H0} (W+)^* u.
CentredField interacting_propagate(const Configuration& cfg, const ScalarField& u, double t,
                                   const DynamicsOptions& opt = {});
std::vector<cplx> interacting_propagate(const Configuration& cfg, const ScalarField& u, double t,
                                        std::span<const Vec3> where, const DynamicsOptions& opt = {});

struct DispersiveFit {
  double p = 0.0;
  double exponent = 0.0;  // slope of log ||e^{-itH} P_ac u||_p against log t
  double constant = 0.0;  // exp(intercept)
  double target = 0.0;    // -3 (1/2 - 1/p)
  double r2 = 0.0;
  std::vector<double> t;
  std::vector<double> norm;
};

// Requires p in [2, 3) and a t grid spanning at least 1.5 decades.
DispersiveFit dispersive_fit(const Configuration& cfg, const ScalarField& u, double p, std::span<const double> t_grid,
                             const DynamicsOptions& opt = {}, const LpOptions& lp = {});

// Geometric grid from t0 to t1 with `per_decade` nodes per decade, both ends included.
std::vector<double> geometric_times(double t0, double t1, std::size_t per_decade);

struct StrichartzResult {
  double p = 0.0;
  double q = 0.0;  // infinity for p = 2
  double T = 0.0;
  double value = 0.0;  // || ||e^{-itH} P_ac u||_p ||_{L^q(1/T, T)}
  double ratio = 0.0;  // value / ||u||_2
  std::vector<double> t;
  std::vector<double> norm;
};

// q = 4p / (3 (p - 2)); time nodes geometric, 16 per decade; trapezoid in log t.
StrichartzResult strichartz_window_norm(const Configuration& cfg, const ScalarField& u, double p, double T,
                                        const DynamicsOptions& opt = {}, const LpOptions& lp = {});

}  // namespace pint
