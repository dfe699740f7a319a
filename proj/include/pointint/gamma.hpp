#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pointint/core.hpp"

namespace pint {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// e^{i z r} / (4 pi r)
cplx green_kernel(cplx z, double r);

struct GammaMatrix {
  cplx z;
  CMatrix entries;
  // Per row |alpha_j| + |z| / 4 pi + sum of off-diagonal moduli: a size that does not cancel at a pole.
  std::vector<double> row_scale;
};

// Diagonal alpha_j - i z / (4 pi); off-diagonal -e^{i z d_jk} / (4 pi d_jk). Exactly symmetric.
GammaMatrix gamma_build(const Configuration& cfg, cplx z);

struct SpectralMultiplier {
  std::vector<double> lambda;
  std::vector<CMatrix> values;  // F(lambda) = lambda Gamma(-lambda)^{-1}
  std::vector<double> condition;  // 1-norm condition estimate of Gamma(-lambda)
};

// F(lambda) at one point; throws NumericalError when Gamma(-lambda) is singular.
CMatrix f_value(const Configuration& cfg, double lambda, double* condition = nullptr);
// F(lambda) + 4 pi i I, the decaying remainder.
CMatrix f_remainder(const Configuration& cfg, double lambda);

SpectralMultiplier f_multiplier(const Configuration& cfg, std::span<const double> lambda_grid);

// Starting guess 1e4 max(1, |alpha|_inf, 1/min d), doubled until |F + 4 pi i| < tol.
double auto_lambda_max(const Configuration& cfg, double tol = 1e-3);
double lambda_max_formula(const Configuration& cfg);

// Geometric nodes over [lambda_min, lambda_max] merged with a uniform grid of spacing dl.
std::vector<double> default_lambda_grid(double lambda_min, double lambda_max, std::size_t n_geometric, double dl,
                                        double uniform_end);

struct BoundState {
  double lambda0;
  double energy;
  CVector coeffs;   // null vector of Gamma(i lambda0), unit 2-norm, first nonzero entry real positive
  double norm_sq;   // ||sum_j c_j G_{i lambda0}(. - y_j)||_2^2
};

// Roots of det Gamma(i lambda) = 0 in (0, lambda_max].
std::vector<BoundState> find_bound_states(const Configuration& cfg, double lambda_max, double tol = 1e-13);

// Real symmetric Gamma(i lambda) and its sorted eigenvalues.
Eigen::MatrixXd gamma_imag_axis(const Configuration& cfg, double lambda);
Eigen::VectorXd gamma_eigenvalues(const Configuration& cfg, double lambda);

}  // namespace pint
