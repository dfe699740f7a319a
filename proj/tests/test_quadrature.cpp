#include <doctest.h>

#include <cmath>
#include <vector>

#include "pointint/quadrature.hpp"

using namespace pint;

TEST_CASE("Gauss-Legendre is exact to degree 2n - 1") {
  for (std::size_t n : {2u, 5u, 16u, 32u}) {
    const auto& g = gauss_legendre(n);
    for (std::size_t d = 0; d < 2 * n; ++d) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += g.w[i] * std::pow(g.x[i], static_cast<double>(d));
      const double want = d % 2 ? 0.0 : 2.0 / static_cast<double>(d + 1);
      CHECK(std::abs(s - want) < 1e-13);
    }
  }
}

TEST_CASE("mapped and composite rules") {
  const auto r = gauss_legendre(1.0, 3.0, 10);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.w[i] * std::exp(r.x[i]);
  CHECK(s == doctest::Approx(std::exp(3.0) - std::exp(1.0)).epsilon(1e-14));
  const std::vector<double> edges{0.0, 0.5, 2.0, 7.0};
  const auto c = composite_gauss(edges, 12);
  CHECK(c.size() == 36);
  double t = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) t += c.w[i] * std::cos(c.x[i]);
  CHECK(t == doctest::Approx(std::sin(7.0)).epsilon(1e-12));
}

TEST_CASE("graded edges are increasing and end at the requested point") {
  const auto e = graded_edges(0.1, 1.0, 1.5, 40.0);
  CHECK(e.front() == 0.0);
  CHECK(e.back() == doctest::Approx(40.0));
  for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i] > e[i - 1]);
}

TEST_CASE("staggered half-line sums with endpoint correction converge to high order") {
  auto err = [](double h) {
    std::vector<double> f;
    for (double x = 0.5 * h; x < 45.0; x += h) f.push_back(std::exp(-x) * std::cos(x));
    return std::abs(halfline_sum(f, h) - 0.5);
  };
  CHECK(err(0.05) < 1e-9);
  CHECK(err(0.1) / err(0.05) > 30.0);
}

TEST_CASE("Lagrange weights reproduce polynomials") {
  const std::vector<double> nodes{0.0, 0.3, 0.7, 1.1, 1.6};
  std::vector<double> w(nodes.size());
  lagrange_weights(nodes, 0.9, w);
  double s0 = 0.0, s4 = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    s0 += w[i];
    s4 += w[i] * std::pow(nodes[i], 4);
  }
  CHECK(s0 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s4 == doctest::Approx(std::pow(0.9, 4)).epsilon(1e-13));
}
