#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pointint/core.hpp"
#include "pointint/field.hpp"
#include "pointint/lattice.hpp"

namespace pint {

// Mean of u over spheres of radius r_i about `centre`, parity even.
// Closed forms for Gaussian terms and for radial terms about `centre`; other terms use
// Gauss-Legendre (polar) x uniform (azimuth) quadrature, doubled from `angular_order`
// until probe values move by less than 1e-9.
RadialProfile spherical_mean(const ScalarField& u, const Vec3& centre, const RadialGrid& grid,
                             int angular_order = 24);

// Quadrature-only spherical mean (the reference the closed forms are tested against).
RadialProfile spherical_mean_quadrature(const ScalarField& u, const Vec3& centre, const RadialGrid& grid,
                                        int angular_order = 24);

// g(r) = r M(r) for a centred field about `centre`. Anchored pieces at `centre` contribute
// their reduced profile; pieces elsewhere contribute the exact two-centre mean
// (W(r + d) - W(|r - d|)) / (2 d) with W the running integral of the reduced profile.
// Parity is odd unless a piece sits at `centre` (then none).
RadialProfile reduced_mean(const CentredField& f, const Vec3& centre, const RadialGrid& grid);
RadialProfile reduced_mean(const ScalarField& u, const Vec3& centre, const RadialGrid& grid);

// s -> int_0^s w, exact for the interpolant of w (6-point Gauss-Legendre per cell); constant past r_max.
class RunningIntegral {
 public:
  explicit RunningIntegral(RadialProfile w);
  cplx operator()(double s) const;

 private:
  RadialProfile w_;
  std::vector<cplx> edges_;
};

// Two-centre reduced mean of a single anchored profile seen from distance d.
std::vector<cplx> two_centre_reduced_mean(const RadialProfile& reduced, double d, const RadialGrid& grid);
cplx two_centre_reduced_mean(const RunningIntegral& w, double d, double r);

// G(lambda) = int_R e^{i lambda r} g(r) dr with g extended by its parity (parity none:
// the half-line integral with endpoint correction). Cosine taper over the outer 10%.
std::vector<cplx> halfline_fourier(const RadialProfile& g, std::span<const double> lambda);

// Hilbert transform (1/pi) PV int g(t)/(r - t) dt of the parity extension, on the same grid.
// Taper over the outer 10%, then the discrete sinc-Hilbert convolution.
RadialProfile hilbert_transform(const RadialProfile& g, Parity extension);

// Multiplies the outer `fraction` of the samples by a raised-cosine ramp down to 0.
void apply_taper(std::span<cplx> v, double fraction = 0.1);

// P(r) = int_0^inf g(s) / (r + s) ds, the difference H(g_even) - H(g_odd) = (2/pi) P.
std::vector<cplx> stieltjes_halfline(const RadialProfile& g);
cplx stieltjes_halfline(const std::function<cplx(double)>& g, double r, double end, double max_panel);

// Reference bump e^{-r^2}, used to peel the value at the origin off reduced profiles
// so the remaining samples vanish at r = 0.
namespace bump {
double value(double r);
double sine_transform(double lambda);     // int_0^inf sin(lambda r) e^{-r^2} dr = Dawson(lambda/2)
double cosine_transform(double lambda);   // sqrt(pi)/2 e^{-lambda^2/4}
double hilbert_even(double r);            // H of e^{-x^2} on the line = (2/sqrt(pi)) Dawson(r)
double stieltjes(double r);               // int_0^inf e^{-s^2}/(r+s) ds

// The companion r e^{-r^2}.
double slope_value(double r);
double slope_sine_transform(double lambda);    // (sqrt(pi)/4) lambda e^{-lambda^2/4}
double slope_cosine_transform(double lambda);  // (1 - lambda Dawson(lambda/2)) / 2
double slope_hilbert_odd(double r);            // H of x e^{-x^2} = r (2/sqrt(pi)) Dawson(r) - 1/sqrt(pi)
double slope_stieltjes(double r);              // int_0^inf s e^{-s^2}/(r+s) ds
}  // namespace bump

// g = g0 e^{-r^2} + g1 r e^{-r^2} + rest with rest = O(r^2) at the origin. Odd profiles are
// returned unchanged (their odd extension is already smooth). g0 and g1 come from the cubic
// through the four innermost nodes.
struct PeeledProfile {
  cplx g0 = 0.0;
  cplx g1 = 0.0;
  RadialProfile rest;
};
PeeledProfile peel_origin(const RadialProfile& g);

}  // namespace pint
