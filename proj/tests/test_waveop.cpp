#include <doctest.h>

#include <cmath>
#include <vector>

#include "pointint/gamma.hpp"
#include "pointint/norms.hpp"
#include "pointint/quadrature.hpp"
#include "pointint/waveop.hpp"

using namespace pint;

namespace {

// <W+ u, v> for one centre at the origin and radial Gaussians u = e^{-a r^2}, v = e^{-b r^2},
// from the s-wave scattering solutions e^{-i delta} sin(k r + delta), k cot delta = 4 pi alpha.
cplx phase_shift_pairing(double alpha, double a, double b) {
  std::vector<double> re, ke;
  for (double x = 0; x < 12; x += 0.25) re.push_back(x);
  re.push_back(12);
  for (double x = 0; x < 16; x += 0.25) ke.push_back(x);
  ke.push_back(16);
  const auto rr = composite_gauss(re, 16);
  const auto kk = composite_gauss(ke, 16);
  cplx acc = 0;
  for (std::size_t q = 0; q < kk.size(); ++q) {
    const double k = kk.x[q];
    const double d = std::atan2(k, 4 * pi * alpha);
    double fu = 0;
    cplx pv = 0;
    for (std::size_t i = 0; i < rr.size(); ++i) {
      const double r = rr.x[i];
      fu += rr.w[i] * std::sin(k * r) * r * std::exp(-a * r * r);
      pv += rr.w[i] * std::conj(std::exp(-I * d) * std::sin(k * r + d)) * r * std::exp(-b * r * r);
    }
    acc += kk.w[q] * fu * pv;
  }
  return 8.0 * acc;
}

const std::vector<Vec3> probes{{0.3, 0.1, -0.2}, {1.0, -0.7, 0.4}, {-2.0, 0.5, 1.5}, {0.05, 0.0, 0.02}};

}  // namespace

TEST_CASE("one centre pairings match the phase-shift oracle") {
  for (double alpha : {1.0, 0.0, -0.3}) {
    const Configuration cfg{{{0, 0, 0}}, {alpha}};
    const WaveOperator W(cfg, build_grid(60.0, 6000));
    const auto u = ScalarField::gaussian(1.0, 1.0, {0, 0, 0});
    const auto v = ScalarField::gaussian(1.0, 0.6, {0, 0, 0});
    const cplx got = inner_product(W.apply(u), CentredField::from(v, cfg.centres));
    const cplx want = phase_shift_pairing(alpha, 1.0, 0.6);
    CHECK(std::abs(got - want) < 1e-8 * std::abs(want));
  }
}

TEST_CASE("resonant closed form agrees with the lattice construction") {
  const Configuration cfg{{{0, 0, 0}}, {0.0}};
  const auto grid = build_grid(40.0, 8000);
  const auto u = ScalarField::gaussian(1.0, 1.2, {0.4, -0.2, 0.1}) + ScalarField::dipole_gaussian(0.5, 0.8, {0, 0, 0}, 0);
  const auto a = resonant_closed_form(cfg, u, grid);
  const auto b = WaveOperator(cfg, grid).apply(u);
  for (const auto& x : probes) CHECK(std::abs(a(x) - b(x)) < 1e-6);
}

TEST_CASE("W+ is an isometry") {
  const Configuration cfg{{{0, 0, 0}, {1.5, 0, 0}, {0, 1.1, 0.6}}, {0.4, -0.05, 1.0}};
  const WaveOperator W(cfg, build_grid(60.0, 6000));
  for (const auto& u : {ScalarField::gaussian(1.0, 1.0, {0.2, 0.1, 0}),
                        ScalarField::gaussian(cplx(0.3, 1.0), 0.5, {1.0, 0.5, 0.3}) +
                            ScalarField::dipole_gaussian(1.0, 1.5, {0, 0, 0}, 1)}) {
    const double in = l2_norm(u);
    CHECK(std::abs(l2_norm(W.apply(u)) - in) < 1e-5 * in);
    CHECK(std::abs(l2_norm(W.apply(u, Sign::minus)) - in) < 1e-5 * in);
  }
}

TEST_CASE("W- is the complex conjugate of W+ conjugated, bit for bit") {
  const Configuration cfg{{{0, 0, 0}, {1.2, 0.3, 0}}, {0.2, -0.1}};
  const WaveOperator W(cfg, build_grid(30.0, 3000));
  const auto u = ScalarField::gaussian(cplx(1.0, 0.5), 1.0, {0.1, 0.2, 0.3});
  const auto minus = W.apply(u, Sign::minus);
  const auto plus = W.apply(u.conjugated(), Sign::plus);
  for (const auto& x : probes) CHECK(minus(x) == std::conj(plus(x)));
}

TEST_CASE("translation covariance") {
  const Configuration cfg{{{0, 0, 0}, {1.2, 0.3, 0}}, {0.2, -0.1}};
  const TranslationOp T{{0.7, -1.1, 2.3}};
  Configuration moved = cfg;
  for (auto& c : moved.centres) c = T.apply_to_point(c);
  const auto grid = build_grid(30.0, 3000);
  const auto u = ScalarField::gaussian(1.0, 1.0, {0.3, 0, 0});
  const auto a = WaveOperator(moved, grid).apply(T.apply(u));
  const auto b = T.apply(WaveOperator(cfg, grid).apply(u));
  for (const auto& x : probes) CHECK(std::abs(a(T.apply_to_point(x)) - b(T.apply_to_point(x))) < 1e-10);
  CHECK(T.then(T.inverse()).offset == Vec3{0, 0, 0});
}

TEST_CASE("the channel operators sum to W+ - 1") {
  const Configuration cfg{{{0, 0, 0}, {1.4, 0, 0}}, {0.3, 0.1}};
  const auto grid = build_grid(30.0, 3000);
  const WaveOperator W(cfg, grid);
  const auto u = ScalarField::gaussian(1.0, 1.0, {0.5, 0.2, 0});
  const auto uc = CentredField::from(u, cfg.centres);
  const auto wu = W.apply(u);
  std::vector<RadialProfile> pieces;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 2; ++k) pieces.push_back(W.omega(j, k, uc));
  for (const auto& x : probes) {
    cplx s = u(x);
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) s += anchored_value(pieces[2 * j + k], distance(x, cfg.centres[j]));
    CHECK(std::abs(s - wu(x)) < 1e-10);
  }
}

TEST_CASE("W W* removes exactly the bound state") {
  const Configuration cfg{{{0, 0, 0}}, {-1.0 / (4 * pi)}};
  const WaveOperator W(cfg, build_grid(60.0, 6000));
  const auto v = ScalarField::gaussian(1.0, 0.8, {0.2, 0, 0});
  // Normalised bound state e^{-r} / (4 pi r) with squared norm 1 / (8 pi): overlap in closed form.
  const auto vb = CentredField::from(v, cfg.centres);
  const auto bs = find_bound_states(cfg, 10.0);
  REQUIRE(bs.size() == 1);
  CentredField psi0(cfg.centres);
  const auto g = build_grid(60.0, 60000);
  RadialProfile w(g, Parity::none);
  for (std::size_t i = 0; i < g.n; ++i) w.values[i] = std::exp(-g.node(i)) / (4 * pi);
  psi0.anchored.push_back({0, w});
  const double overlap2 = std::norm(inner_product(psi0, vb)) * 8 * pi;
  const double want = l2_norm(v) * l2_norm(v) - overlap2;
  const double got = std::pow(l2_norm(W.adjoint(v)), 2);
  CHECK(std::abs(got - want) < 1e-4 * want);
  // The range of W+ is orthogonal to the bound state.
  CHECK(std::abs(inner_product(psi0, W.apply(ScalarField::gaussian(1.0, 1.0, {0, 0, 0})))) < 1e-6);
}

TEST_CASE("adjoint pairing identity converges with the grid step") {
  const Configuration cfg{{{0, 0, 0}, {1.5, 0, 0}}, {0.5, 1.0}};
  const auto u = ScalarField::gaussian(1.0, 1.0, {0.2, 0.1, 0});
  const auto v = ScalarField::gaussian(1.0, 0.7, {1.0, -0.2, 0.3});
  auto defect = [&](std::size_t n) {
    const WaveOperator W(cfg, build_grid(60.0, n));
    const cplx a = inner_product(W.apply(u), CentredField::from(v, cfg.centres));
    const cplx b = inner_product(CentredField::from(u, cfg.centres), W.adjoint(v));
    return std::abs(a - b) / std::abs(a);
  };
  const double coarse = defect(6000), fine = defect(12000);
  CHECK(coarse < 5e-6);
  CHECK(fine < coarse / 8);
}
