#pragma once

#include <functional>

#include "pointint/core.hpp"
#include "pointint/field.hpp"

namespace pint {

// <a, b> = int conj(a) b over R^3.
//
// Gaussian pairs use the product theorem in closed form. Pairs involving anchored pieces
// reduce to half-line integrals of reduced profiles: free against anchored uses the reduced
// spherical mean of the free part about the anchor, anchored against anchored at another
// centre uses the two-centre mean. Other free pairs fall back to cubature.
cplx inner_product(const ScalarField& a, const ScalarField& b);
cplx inner_product(const CentredField& a, const CentredField& b);
double l2_norm(const ScalarField& f);
double l2_norm(const CentredField& f);

struct LpOptions {
  int angular_order = 16;        // starting Gauss-Legendre order in the polar angle
  double angular_tol = 1e-8;     // relative change accepted when doubling the angular order
  double panel = 0.0;            // radial panel width; 0 picks one from the field's scales
  std::size_t panel_order = 8;
};

// ||f||_p^p = int |f|^p. p = 2 takes the exact L2 path. A field radial about one point is
// a 1-D integral; a single anchor centre uses spherical coordinates about it; several
// anchor centres use the partition of unity phi_j = |x - y_j|^{-4} / sum_k |x - y_k|^{-4}.
double lp_norm(const CentredField& f, double p, const LpOptions& opt = {});
double lp_norm(const ScalarField& f, double p, const LpOptions& opt = {});

// int_{r_in < |x - c| < r_out} |f|^p, returned as the p-th root. No anchor centre other
// than c may lie within r_out of c.
double lp_norm_shell(const CentredField& f, double p, const Vec3& c, double r_in, double r_out,
                     const LpOptions& opt = {});

// int_{r_in}^{r_out} rho^2 dr int_{S^2} fn(c + rho w) dw with graded radial panels near r_in
// when r_in = 0 and angular order doubled until the result settles.
double sphere_integral(const std::function<double(const Vec3&)>& fn, const Vec3& c, double r_in, double r_out,
                       double panel, const LpOptions& opt);

}  // namespace pint
