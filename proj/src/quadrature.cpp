#include "pointint/quadrature.hpp"

#include <map>
#include <mutex>

#include <Eigen/Dense>
#include <boost/math/special_functions/legendre.hpp>

namespace pint {

const QuadRule& gauss_legendre(std::size_t order) {
  static std::mutex mu;
  static std::map<std::size_t, QuadRule> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(order); it != cache.end()) return it->second;
  if (order < 1) throw ValidationError("Gauss-Legendre order must be >= 1");
  const int n = static_cast<int>(order);
  // positive zeros only, ascending; the middle zero is included for odd n
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  QuadRule q;
  q.x.resize(order);
  q.w.resize(order);
  auto weight = [n](double x) {
    const double dp = boost::math::legendre_p_prime(n, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  // zeros come ascending from the middle; for odd n the first one is 0
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    const std::size_t up = order / 2 + i;
    const std::size_t down = order - 1 - up;
    q.x[up] = zeros[i];
    q.x[down] = -zeros[i];
    q.w[up] = q.w[down] = weight(zeros[i]);
  }
  return cache.emplace(order, std::move(q)).first->second;
}

QuadRule gauss_legendre(double a, double b, std::size_t order) {
  const auto& ref = gauss_legendre(order);
  QuadRule q;
  q.x.resize(order);
  q.w.resize(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < order; ++i) {
    q.x[i] = mid + half * ref.x[i];
    q.w[i] = half * ref.w[i];
  }
  return q;
}

QuadRule composite_gauss(std::span<const double> edges, std::size_t order) {
  QuadRule q;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    auto panel = gauss_legendre(edges[p], edges[p + 1], order);
    q.x.insert(q.x.end(), panel.x.begin(), panel.x.end());
    q.w.insert(q.w.end(), panel.w.begin(), panel.w.end());
  }
  return q;
}

std::vector<double> graded_edges(double w0, double split, double ratio, double end) {
  std::vector<double> e{0.0};
  while (e.back() + w0 < split * (1.0 - 1e-12)) e.push_back(e.back() + w0);
  if (e.back() < split) e.push_back(split);
  double w = w0;
  while (e.back() < end) {
    w *= ratio;
    e.push_back(std::min(end, e.back() + w));
  }
  return e;
}

const std::array<double, 6>& midpoint_end_correction() {
  static const std::array<double, 6> c = [] {
    // Moments of the midpoint error for x^m on [0, inf): int - sum, with nodes i + 1/2.
    const double e[6] = {0.0, -1.0 / 24.0, 0.0, 7.0 / 960.0, 0.0, -31.0 / 8064.0};
    Eigen::Matrix<double, 6, 6> A;
    Eigen::Matrix<double, 6, 1> b;
    for (int m = 0; m < 6; ++m) {
      for (int i = 0; i < 6; ++i) A(m, i) = std::pow(i + 0.5, m);
      b(m) = e[m];
    }
    Eigen::Matrix<double, 6, 1> sol = A.fullPivLu().solve(b);
    std::array<double, 6> out{};
    for (int i = 0; i < 6; ++i) out[static_cast<std::size_t>(i)] = sol(i);
    return out;
  }();
  return c;
}

template <class T>
static T halfline_sum_impl(std::span<const T> f, double h) {
  const auto& c = midpoint_end_correction();
  T acc{};
  for (const T& v : f) acc += v;
  for (std::size_t i = 0; i < 6 && i < f.size(); ++i) acc += c[i] * f[i];
  return h * acc;
}

cplx halfline_sum(std::span<const cplx> f, double h) { return halfline_sum_impl(f, h); }
double halfline_sum(std::span<const double> f, double h) { return halfline_sum_impl(f, h); }

void lagrange_weights(std::span<const double> nodes, double t, std::span<double> out) {
  const std::size_t n = nodes.size();
  for (std::size_t a = 0; a < n; ++a) {
    double w = 1.0;
    for (std::size_t b = 0; b < n; ++b)
      if (b != a) w *= (t - nodes[b]) / (nodes[a] - nodes[b]);
    out[a] = w;
  }
}

}  // namespace pint
