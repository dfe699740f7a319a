#include "pointint/gamma.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace pint {

cplx green_kernel(cplx z, double r) {
  if (!(r > 0.0)) throw ValidationError("green_kernel: r must be positive");
  return std::exp(I * z * r) / (4.0 * pi * r);
}

GammaMatrix gamma_build(const Configuration& cfg, cplx z) {
  const auto n = static_cast<Eigen::Index>(cfg.size());
  CMatrix g(n, n);
  std::vector<double> scale(cfg.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto sj = static_cast<std::size_t>(j);
    g(j, j) = cfg.alphas[sj] - I * z / (4.0 * pi);
    scale[sj] += std::abs(cfg.alphas[sj]) + std::abs(z) / (4.0 * pi);
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double d = cfg.dist(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
      const cplx v = -std::exp(I * z * d) / (4.0 * pi * d);
      g(j, k) = v;
      g(k, j) = v;
      scale[sj] += std::abs(v);
      scale[static_cast<std::size_t>(k)] += std::abs(v);
    }
  }
  return {z, std::move(g), std::move(scale)};
}

CMatrix f_value(const Configuration& cfg, double lambda, double* condition) {
  const auto gm = gamma_build(cfg, -lambda);
  Eigen::PartialPivLU<CMatrix> lu(gm.entries);
  const double rcond = lu.rcond();
  if (condition) *condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(rcond > 1e-14)) {
    std::ostringstream os;
    os << "Gamma(-lambda) singular at lambda = " << lambda << " (rcond " << rcond << ")";
    throw NumericalError(os.str());
  }
  return lambda * lu.inverse();
}

CMatrix f_remainder(const Configuration& cfg, double lambda) {
  // F + 4 pi i = 4 pi i Gamma(-lambda)^{-1} (Gamma(-lambda) - i lambda / (4 pi)), which avoids
  // subtracting two O(lambda) quantities at large lambda.
  const auto gm = gamma_build(cfg, -lambda);
  Eigen::PartialPivLU<CMatrix> lu(gm.entries);
  if (!(lu.rcond() > 1e-14)) {
    std::ostringstream os;
    os << "Gamma(-lambda) singular at lambda = " << lambda;
    throw NumericalError(os.str());
  }
  CMatrix a = gm.entries;
  a.diagonal().array() -= I * lambda / (4.0 * pi);
  return 4.0 * pi * I * lu.solve(a);
}

SpectralMultiplier f_multiplier(const Configuration& cfg, std::span<const double> lambda_grid) {
  SpectralMultiplier out;
  out.lambda.assign(lambda_grid.begin(), lambda_grid.end());
  out.values.reserve(lambda_grid.size());
  out.condition.reserve(lambda_grid.size());
  double prev = 0.0;
  for (double l : lambda_grid) {
    if (!(l > prev)) throw ValidationError("f_multiplier: lambda grid must be positive and increasing");
    prev = l;
    double cond = 0.0;
    out.values.push_back(f_value(cfg, l, &cond));
    out.condition.push_back(cond);
  }
  return out;
}

double lambda_max_formula(const Configuration& cfg) {
  double amax = 0.0;
  for (double a : cfg.alphas) amax = std::max(amax, std::abs(a));
  double s = std::max(1.0, amax);
  if (cfg.size() > 1) s = std::max(s, 1.0 / cfg.min_distance());
  return 1e4 * s;
}

double auto_lambda_max(const Configuration& cfg, double tol) {
  double l = lambda_max_formula(cfg);
  for (int it = 0; it < 60; ++it) {
    if (f_remainder(cfg, l).operatorNorm() < tol) return l;
    l *= 2.0;
  }
  throw NumericalError("auto_lambda_max: multiplier tail did not settle");
}

std::vector<double> default_lambda_grid(double lambda_min, double lambda_max, std::size_t n_geometric, double dl,
                                        double uniform_end) {
  std::vector<double> g;
  const double ratio = std::pow(lambda_max / lambda_min, 1.0 / static_cast<double>(std::max<std::size_t>(1, n_geometric - 1)));
  double l = lambda_min;
  for (std::size_t i = 0; i < n_geometric; ++i, l *= ratio) g.push_back(l);
  for (double u = 0.5 * dl; u <= uniform_end; u += dl) g.push_back(u);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end(), [](double a, double b) { return std::abs(a - b) <= 1e-14 * b; }), g.end());
  return g;
}

Eigen::MatrixXd gamma_imag_axis(const Configuration& cfg, double lambda) {
  return gamma_build(cfg, cplx(0.0, lambda)).entries.real();
}

Eigen::VectorXd gamma_eigenvalues(const Configuration& cfg, double lambda) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma_imag_axis(cfg, lambda), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::vector<BoundState> find_bound_states(const Configuration& cfg, double lambda_max, double tol) {
  if (!(lambda_max > 0.0)) throw ValidationError("find_bound_states: lambda_max must be positive");
  const auto n = static_cast<Eigen::Index>(cfg.size());
  // Eigenvalues of Gamma(i lambda) increase strictly with lambda: the derivative
  // (I + [e^{-lambda d}]) / (4 pi) is positive definite. Each crosses zero at most once.
  const Eigen::VectorXd lo = gamma_eigenvalues(cfg, 0.0);
  const Eigen::VectorXd hi = gamma_eigenvalues(cfg, lambda_max);
  std::vector<BoundState> out;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(lo(k) < 0.0 && hi(k) > 0.0)) continue;
    auto f = [&](double l) { return gamma_eigenvalues(cfg, l)(k); };
    boost::uintmax_t iters = 200;
    auto term = [tol](double a, double b) { return std::abs(b - a) <= tol * std::max(1.0, std::abs(a)); };
    const auto [a, b] = boost::math::tools::toms748_solve(f, 0.0, lambda_max, lo(k), hi(k), term, iters);
    const double l0 = 0.5 * (a + b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma_imag_axis(cfg, l0));
    CVector c = es.eigenvectors().col(k).cast<cplx>();
    Eigen::Index lead = 0;
    c.cwiseAbs().maxCoeff(&lead);
    if (c(lead).real() < 0.0) c = -c;
    double nsq = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index m = 0; m < n; ++m) {
        const double d = j == m ? 0.0 : cfg.dist(static_cast<std::size_t>(j), static_cast<std::size_t>(m));
        nsq += (std::conj(c(j)) * c(m)).real() * std::exp(-l0 * d) / (8.0 * pi * l0);
      }
    out.push_back({l0, -l0 * l0, c, nsq});
  }
  if (out.size() > cfg.size()) throw NumericalError("find_bound_states: more roots than centres");
  std::sort(out.begin(), out.end(), [](const BoundState& x, const BoundState& y) { return x.lambda0 < y.lambda0; });
  return out;
}

}  // namespace pint
