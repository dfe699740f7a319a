#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "pointint/core.hpp"

namespace pint {

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

// Gauss-Legendre on [-1, 1]; cached per order, thread-safe.
const QuadRule& gauss_legendre(std::size_t order);

// Gauss-Legendre mapped to [a, b].
QuadRule gauss_legendre(double a, double b, std::size_t order);

// Composite rule over the given panel edges.
QuadRule composite_gauss(std::span<const double> edges, std::size_t order);

// Panel edges 0, w0, 2 w0, ... up to `split`, then geometric growth by `ratio` up to `end`.
std::vector<double> graded_edges(double w0, double split, double ratio, double end);

// Weights c_0..c_5 such that, for f smooth on [0, inf) sampled at x_i = (i + 1/2) h,
//   int_0^inf f ~ h sum_i f(x_i) + h sum_{i<6} c_i f(x_i)
// removes the midpoint-rule endpoint error through order h^6.
const std::array<double, 6>& midpoint_end_correction();

// Half-line integral of samples on a staggered grid, with the endpoint correction.
cplx halfline_sum(std::span<const cplx> f, double h);
double halfline_sum(std::span<const double> f, double h);

// Lagrange basis weights for nodes evaluated at t.
void lagrange_weights(std::span<const double> nodes, double t, std::span<double> out);

}  // namespace pint
