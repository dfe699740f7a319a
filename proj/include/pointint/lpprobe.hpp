#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pointint/core.hpp"
#include "pointint/field.hpp"
#include "pointint/norms.hpp"

namespace pint {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y = slope x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct BoundednessRow {
  std::size_t member = 0;
  double p = 0.0;
  double norm_in = 0.0;
  double norm_out = 0.0;
  double ratio = 0.0;
};

struct BoundednessTable {
  std::vector<BoundednessRow> rows;
  std::vector<double> p_grid;
  std::vector<double> max_ratio;  // per p
  std::vector<double> min_ratio;
};

// ||W+ u||_p / ||u||_p for each family member and p.
BoundednessTable boundedness_scan(const Configuration& cfg, std::span<const ScalarField> family,
                                  std::span<const double> p_grid, const RadialGrid& grid, const LpOptions& opt = {});

// Ten Gaussians of varying width and offset about the first centre.
std::vector<ScalarField> gaussian_family(const Configuration& cfg, std::size_t count = 10);

// f0(r) = 1 / (1 + r^2) times a C-infinity step that falls from 1 to 0 over [4.9, 5.1].
double counterexample_profile(double r);
inline constexpr double counterexample_support = 5.1;

struct P1Options {
  double h = 0.01;             // radial step for A(R)
  std::vector<double> R_ball;  // radii at which B(eps, R) is compared with A(R); empty: {R_list.front()}
  double wave_h = 0.01;        // radial step of the wave-operator grid for B
  double agree_tol = 0.02;     // B(eps_min, R) vs A(R), relative
  LpOptions lp{};
};

struct P1Row {
  double eps = 0.0;
  double R = 0.0;
  double B = 0.0;
  double A = 0.0;
  double rel = 0.0;  // |B - A| / A
};

struct P1Report {
  double moment = 0.0;         // int_R r^2 f = 2 int_0^inf r^2 f
  double stated_slope = 0.0;   // (2/pi) moment
  double derived_slope = 0.0;  // 4 moment, from the 1/(pi rho) tail of H(r^2 f)
  std::vector<double> R;
  std::vector<double> A;       // 4 pi int_0^R |(1 - iH)(r^2 f)|
  LineFit fit;                 // A against ln R
  std::vector<P1Row> rows;
  std::vector<double> l1_scaled;  // ||u_eps||_1 per eps
  double l1 = 0.0;                // 4 pi int r^2 |f|
  bool orders_agree = true;       // every B(eps_min, R) within agree_tol of A(R)
};

// A(R) from the Hilbert transform of r^2 f, and B(eps, R) = ||1_{|x - y1| <= R} (W+ - 1) u||_1
// with u = f(|x - y1|) for the configuration rescaled about y1: centres y1 + (y_k - y1) / eps,
// strengths alpha eps. This equals ||1_{|x-y1| <= R}(W+_{alpha,Y} - 1) u_eps||_1 at scale eps.
P1Report p1_blowup_scan(const std::function<double(double)>& f, double support, std::span<const double> R_list,
                        std::span<const double> eps_list, const Configuration& cfg, const P1Options& opt = {});

struct P3Options {
  std::size_t centre = 0;
  double delta0 = 0.0;  // outer shell radius; 0: min(0.5, half the distance to the nearest centre)
  double p = 3.0;
  LpOptions lp{};
};

struct P3Report {
  cplx charge;                // q at the probed centre
  double predicted = 0.0;     // (|q| / 4 pi)^3 4 pi
  std::vector<double> delta;
  std::vector<double> value;  // ||D||_{L^p(delta < |x - y| < delta0)}^p
  LineFit fit;                // value against ln(1 / delta)
};

// D = (R_{alpha,Y}(-c^2) - R0(-c^2)) u = sum_j q_j G_{ic}^{y_j}; local L^p norms about one centre.
P3Report p3_blowup_scan(const Configuration& cfg, const ScalarField& u, double c, std::span<const double> delta_list,
                        const P3Options& opt = {});

}  // namespace pint
