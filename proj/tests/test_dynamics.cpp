#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "pointint/dynamics.hpp"
#include "pointint/norms.hpp"

using namespace pint;

namespace {

// e^{-i t H0} e^{-a r^2} = (1 + 4 i a t)^{-3/2} e^{-a r^2 / (1 + 4 i a t)}
cplx gaussian_evolved(double a, double t, double r) {
  const cplx s = 1.0 + 4.0 * I * a * t;
  return std::pow(s, -1.5) * std::exp(-a * r * r / s);
}

RadialProfile reduced_gaussian(double a) {
  const auto g = build_grid(10.0, 1000);
  RadialProfile w(g, Parity::odd);
  for (std::size_t i = 0; i < g.n; ++i) w.values[i] = g.node(i) * std::exp(-a * g.node(i) * g.node(i));
  return w;
}

}  // namespace

TEST_CASE("reduced evolution matches the Gaussian closed form on both paths") {
  const auto w = reduced_gaussian(1.0);
  for (double t : {0.3, 2.0, 9.9, 10.1, 25.0}) {
    const auto out = build_grid(10.0 + 8.0 * t, 2000);
    const auto e = evolve_reduced(w, t, out);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < out.n; i += 7) {
      const double r = out.node(i);
      err = std::max(err, std::abs(e.values[i] - r * gaussian_evolved(1.0, t, r)));
      scale = std::max(scale, std::abs(r * gaussian_evolved(1.0, t, r)));
    }
    CHECK(err < 1e-8 * scale);
  }
  // Negative times run backwards.
  const auto out = build_grid(20.0, 400);
  const auto e = evolve_reduced(w, -1.5, out);
  CHECK(std::abs(e.values[40] - out.node(40) * gaussian_evolved(1.0, -1.5, out.node(40))) < 1e-9);
}

TEST_CASE("kernel path refuses aliased sums") {
  const auto g = build_grid(10.0, 50);
  RadialProfile w(g, Parity::odd);
  CHECK_THROWS_AS(evolve_reduced(w, 11.0, build_grid(2000.0, 100)), NumericalError);
}

TEST_CASE("free propagation of fields") {
  const std::vector<Vec3> pts{{0.1, 0.2, 0.3}, {2.0, -1.0, 0.5}, {-4.0, 3.0, 1.0}};
  const auto g = ScalarField::gaussian(1.0, 0.8, {0.5, 0, 0});
  const auto rad = ScalarField::radial({0.5, 0, 0}, [](double r) { return cplx(std::exp(-0.8 * r * r)); }, 8.0);
  const auto gen = ScalarField::generic([](const Vec3& x) { return cplx(std::exp(-0.8 * dot(x - Vec3{0.5, 0, 0}, x - Vec3{0.5, 0, 0}))); },
                                        {0.5, 0, 0}, 8.0);
  for (double t : {0.5, 3.0}) {
    const auto a = free_propagate(g, t, pts);
    const auto b = free_propagate(rad, t, pts);
    const auto c = free_propagate(gen, t, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const cplx want = gaussian_evolved(0.8, t, distance(pts[i], {0.5, 0, 0}));
      CHECK(std::abs(a[i] - want) < 1e-14);
      CHECK(std::abs(b[i] - want) < 1e-8);
      CHECK(std::abs(c[i] - want) < 1e-7);
    }
  }
}

TEST_CASE("interacting propagation at t = 0 returns u when there are no bound states") {
  const Configuration cfg{{{0, 0, 0}}, {1.0}};
  const auto u = ScalarField::gaussian(1.0, 1.0, {0.3, 0, 0});
  const std::vector<Vec3> pts{{0.3, 0, 0}, {1.0, 0.5, 0}, {-0.5, 0.2, 0.7}};
  const auto v = interacting_propagate(cfg, u, 0.0, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(v[i] - u(pts[i])) < 2e-3);
}

TEST_CASE("interacting propagation conserves the absolutely continuous norm") {
  const Configuration cfg{{{0, 0, 0}, {1.5, 0, 0}}, {1.0, 0.4}};
  const auto u = ScalarField::gaussian(1.0, 1.0, {0.3, 0, 0});
  DynamicsOptions o;
  o.kappa = 40.0;
  for (double t : {0.5, 5.0}) {
    const auto f = interacting_propagate(cfg, u, t, o);
    CHECK(l2_norm(f) == doctest::Approx(l2_norm(u)).epsilon(1e-3));
  }
}

TEST_CASE("resonant case: truncation error of P_ac falls as the grid grows") {
  // The adjoint output decays like |x|^-2 when alpha = 0, so a finite grid loses O(1/r_max) of its norm.
  const Configuration cfg{{{0, 0, 0}}, {0.0}};
  const auto u = ScalarField::gaussian(1.0, 1.0, {0.3, 0, 0});
  double prev = std::numeric_limits<double>::infinity();
  for (double r_max : {30.0, 60.0, 120.0}) {
    DynamicsOptions o;
    o.grid = build_grid(r_max, static_cast<std::size_t>(r_max * 100));
    const double err = std::abs(l2_norm(interacting_propagate(cfg, u, 0.0, o)) - l2_norm(u));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-2 * l2_norm(u));
}

TEST_CASE("time grids and argument checks") {
  const auto t = geometric_times(1.0, 100.0, 4);
  CHECK(t.size() == 9);
  CHECK(t.front() == 1.0);
  CHECK(t.back() == doctest::Approx(100.0));
  CHECK_THROWS_AS(geometric_times(0.0, 1.0, 4), ValidationError);
  const Configuration cfg{{{0, 0, 0}}, {1.0}};
  const auto u = ScalarField::gaussian(1.0, 1.0, {0, 0, 0});
  CHECK_THROWS_AS(dispersive_fit(cfg, u, 3.0, t), ValidationError);
  CHECK_THROWS_AS(dispersive_fit(cfg, u, 1.5, t), ValidationError);
  const auto short_grid = geometric_times(1.0, 10.0, 4);
  CHECK_THROWS_AS(dispersive_fit(cfg, u, 2.5, short_grid), ValidationError);
  CHECK_THROWS_AS(strichartz_window_norm(cfg, u, 2.5, 0.5), ValidationError);
}

TEST_CASE("grid-loss guard fires when the output grid is too short") {
  const Configuration cfg{{{0, 0, 0}}, {1.0}};
  const auto u = ScalarField::gaussian(1.0, 1.0, {0, 0, 0});
  DynamicsOptions o;
  o.kappa = 0.05;
  const auto t = geometric_times(3.0, 300.0, 1);
  CHECK_THROWS_AS(dispersive_fit(cfg, u, 2.5, t, o), NumericalError);
}

TEST_CASE("Strichartz window norm at p = 2 is the conserved L2 norm") {
  const Configuration cfg{{{0, 0, 0}}, {1.0}};
  const auto u = ScalarField::gaussian(1.0, 1.0, {0.2, 0, 0});
  const auto s = strichartz_window_norm(cfg, u, 2.0, 2.0);
  CHECK(std::isinf(s.q));
  CHECK(s.ratio == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(s.t.size() == s.norm.size());
}
