#include <doctest.h>

#include <cmath>

#include "pointint/gamma.hpp"

using namespace pint;

namespace {

Configuration one(double alpha) { return {{{0, 0, 0}}, {alpha}}; }

Configuration three() {
  return {{{0, 0, 0}, {1.2, 0, 0}, {0.3, 0.9, -0.4}}, {-0.2, 0.05, -0.1}};
}

}  // namespace

TEST_CASE("Gamma entries and exact symmetry") {
  const auto cfg = three();
  const cplx z(0.7, 0.3);
  const auto g = gamma_build(cfg, z).entries;
  for (int j = 0; j < 3; ++j) {
    CHECK(g(j, j) == cfg.alphas[std::size_t(j)] - I * z / (4 * pi));
    for (int k = 0; k < 3; ++k) {
      CHECK(g(j, k) == g(k, j));
      if (j != k) {
        const double d = cfg.dist(std::size_t(j), std::size_t(k));
        CHECK(std::abs(g(j, k) + std::exp(I * z * d) / (4 * pi * d)) < 1e-15);
      }
    }
  }
  CHECK(std::abs(green_kernel(cplx(0, 1), 2.0) - std::exp(-2.0) / (8 * pi)) < 1e-16);
}

TEST_CASE("one centre multiplier in closed form") {
  for (double alpha : {-0.3, 0.0, 0.4}) {
    for (double lam : {0.1, 1.0, 17.0}) {
      const cplx want = lam / (alpha + I * lam / (4 * pi));
      CHECK(std::abs(f_value(one(alpha), lam)(0, 0) - want) < 1e-12 * std::abs(want));
      const cplx rem = 4 * pi * I * alpha / (alpha + I * lam / (4 * pi));
      CHECK(std::abs(f_remainder(one(alpha), lam)(0, 0) - rem) < 1e-10);
    }
  }
}

TEST_CASE("remainder decays at large lambda") {
  const auto cfg = three();
  double prev = f_remainder(cfg, 10.0).norm();
  for (double lam : {1e2, 1e3, 1e4}) {
    const double r = f_remainder(cfg, lam).norm();
    CHECK(r < prev);
    prev = r;
  }
  CHECK(prev < 1e-2);
  const double lmax = auto_lambda_max(cfg, 1e-3);
  CHECK(f_remainder(cfg, lmax).norm() < 1e-3 * std::sqrt(3.0) + 1e-12);
}

TEST_CASE("single attractive centre has one bound state at lambda0 = -4 pi alpha") {
  const auto bs = find_bound_states(one(-1.0 / (4 * pi)), 10.0);
  REQUIRE(bs.size() == 1);
  CHECK(bs[0].lambda0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(bs[0].energy == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(bs[0].norm_sq == doctest::Approx(1.0 / (8 * pi)).epsilon(1e-10));
  CHECK(find_bound_states(one(0.0), 50.0).empty());
  CHECK(find_bound_states(one(1.0), 50.0).empty());
}

TEST_CASE("dimer bound states are null vectors of Gamma") {
  const Configuration cfg{{{0, 0, 0}, {1, 0, 0}}, {-0.05, -0.05}};
  const auto bs = find_bound_states(cfg, 20.0);
  REQUIRE(!bs.empty());
  CHECK(bs.size() <= 2);
  for (const auto& b : bs) {
    const auto g = gamma_imag_axis(cfg, b.lambda0);
    CHECK((g * b.coeffs.real()).norm() < 1e-10);
    CHECK(b.coeffs.norm() == doctest::Approx(1.0));
  }
  // Symmetric state: alpha + lambda / 4 pi = e^{-lambda} / 4 pi.
  const double l = bs[0].lambda0;
  CHECK(std::abs(-0.05 + l / (4 * pi) - std::exp(-l) / (4 * pi)) < 1e-12);
}

TEST_CASE("at most N bound states and eigenvalues increase along the imaginary axis") {
  const auto cfg = three();
  CHECK(find_bound_states(cfg, 50.0).size() <= 3);
  auto prev = gamma_eigenvalues(cfg, 0.01);
  for (double lam = 0.2; lam < 8.0; lam += 0.4) {
    const auto e = gamma_eigenvalues(cfg, lam);
    for (int i = 0; i < 3; ++i) CHECK(e(i) > prev(i));
    prev = e;
  }
}

TEST_CASE("multiplier grid and singular points") {
  const auto cfg = three();
  const std::vector<double> grid{0.5, 1.0, 2.0};
  const auto m = f_multiplier(cfg, grid);
  REQUIRE(m.values.size() == 3);
  CHECK((m.values[1] - f_value(cfg, 1.0)).norm() < 1e-14);
  // Gamma(-lambda) for alpha = 0 at a single centre is i lambda / 4 pi, never singular for lambda > 0.
  CHECK_NOTHROW(f_value(one(0.0), 1e-3));
  const auto lg = default_lambda_grid(1e-3, 50.0, 20, 0.5, 10.0);
  for (std::size_t i = 1; i < lg.size(); ++i) CHECK(lg[i] > lg[i - 1]);
}
