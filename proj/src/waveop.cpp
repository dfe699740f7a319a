#include "pointint/waveop.hpp"

#include <algorithm>

#include <gsl/gsl_sf_expint.h>
#include <tbb/parallel_for.h>

#include "pointint/quadrature.hpp"
#include "pointint/radial.hpp"

namespace pint {

namespace {

double lattice_dl_max(const Configuration& cfg, const RadialGrid& grid, double factor) {
  return factor / (2.0 * grid.r_max + cfg.max_distance());
}

// Number of leading lattice nodes where any of the coefficient rows is above cut * peak.
std::size_t spectral_count(const std::vector<std::vector<cplx>>& rows, double cut) {
  double peak = 0.0;
  for (const auto& r : rows)
    for (const auto& v : r) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0;
  std::size_t last = 0;
  for (const auto& r : rows)
    for (std::size_t m = r.size(); m-- > 0;)
      if (std::abs(r[m]) > cut * peak) {
        last = std::max(last, m + 1);
        break;
      }
  const std::size_t n = rows.front().size();
  return std::min(n, last + 8);
}

// int_L^inf e^{i lambda s} / lambda^2 d lambda
cplx tail_kernel(double s, double L) {
  const cplx head = std::exp(I * (L * s)) / L;
  if (s == 0.0) return head;
  const double x = L * std::abs(s);
  const cplx k(-gsl_sf_Ci(x), (s > 0.0 ? 1.0 : -1.0) * (0.5 * pi - gsl_sf_Si(x)));
  return head + I * s * k;
}

}  // namespace

WaveOperator::WaveOperator(Configuration cfg, RadialGrid grid, WaveOptions opt)
    : cfg_(std::move(cfg)),
      grid_(grid),
      opt_(opt),
      lat_(grid.h(), grid.n, lattice_dl_max(cfg_, grid, opt.lattice_factor)) {
  validate(cfg_);
  if (grid_.n < 16) throw ValidationError("WaveOperator: grid needs at least 16 nodes");
}

void WaveOperator::ensure_remainder(std::size_t count) const {
  std::lock_guard lock(mu_);
  if (count <= remainder_count_) return;
  const std::size_t n = cfg_.size(), nn = n * n;
  const std::size_t start = remainder_count_;
  remainder_.resize(count * nn);
  tbb::parallel_for(start, count, [&](std::size_t m) {
    const CMatrix f = f_remainder(cfg_, lat_.lambda(m));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        remainder_[m * nn + j * n + k] = f(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
  });
  remainder_count_ = count;
}

const cplx* WaveOperator::remainder_at(std::size_t m) const {
  if (m >= lat_.n_lambda()) throw ValidationError("remainder_at: lattice index out of range");
  ensure_remainder(m + 1);
  return remainder_.data() + m * cfg_.size() * cfg_.size();
}

WaveOperator::Reduced WaveOperator::reduce(const CentredField& u, std::size_t k) const {
  auto p = peel_origin(reduced_mean(u, cfg_.centres[k], grid_));
  apply_taper(p.rest.values, opt_.taper);
  return {p.g0, p.g1, std::move(p.rest)};
}

std::vector<cplx> WaveOperator::sine_coeffs(const Reduced& red) const {
  const double h = grid_.h();
  auto plus = lat_.to_lambda(red.rest.values, +1);
  const auto minus = lat_.to_lambda(red.rest.values, -1);
  for (std::size_t m = 0; m < plus.size(); ++m) {
    plus[m] = h * (plus[m] - minus[m]) / (2.0 * I);
    const double l = lat_.lambda(m);
    plus[m] += red.g0 * bump::sine_transform(l) + red.g1 * bump::slope_sine_transform(l);
  }
  return plus;
}

std::vector<cplx> WaveOperator::exp_coeffs(const Reduced& red) const {
  const double h = grid_.h();
  const auto& c = midpoint_end_correction();
  auto e = lat_.to_lambda(red.rest.values, +1);
  for (std::size_t m = 0; m < e.size(); ++m) {
    const double l = lat_.lambda(m);
    cplx corr = 0.0;
    for (std::size_t i = 0; i < 6; ++i) corr += c[i] * red.rest.values[i] * std::exp(I * l * grid_.node(i));
    e[m] = h * (e[m] + corr);
    e[m] += red.g0 * cplx(bump::cosine_transform(l), bump::sine_transform(l)) +
            red.g1 * cplx(bump::slope_cosine_transform(l), bump::slope_sine_transform(l));
  }
  return e;
}

// -(g - i H g_odd) on the grid.
std::vector<cplx> WaveOperator::constant_forward(const Reduced& red) const {
  auto hg = sinc_hilbert(red.rest.values, Parity::odd);
  std::vector<cplx> out(grid_.n);
  for (std::size_t i = 0; i < grid_.n; ++i) {
    const double r = grid_.node(i);
    cplx g = red.rest.values[i];
    if (red.g0 != 0.0 || red.g1 != 0.0) {
      g += red.g0 * bump::value(r) + red.g1 * bump::slope_value(r);
      hg[i] += red.g0 * (bump::hilbert_even(r) - 2.0 / pi * bump::stieltjes(r)) + red.g1 * bump::slope_hilbert_odd(r);
    }
    out[i] = -(g - I * hg[i]);
  }
  return out;
}

// -g + i H g_even on the grid; H g_even = H g_odd + (2/pi) int_0^inf g(s)/(r+s) ds.
std::vector<cplx> WaveOperator::constant_adjoint(const Reduced& red) const {
  auto hg = sinc_hilbert(red.rest.values, Parity::odd);
  const auto p = stieltjes_halfline(red.rest);
  std::vector<cplx> out(grid_.n);
  for (std::size_t i = 0; i < grid_.n; ++i) {
    const double r = grid_.node(i);
    cplx g = red.rest.values[i];
    hg[i] += 2.0 / pi * p[i];
    if (red.g0 != 0.0 || red.g1 != 0.0) {
      g += red.g0 * bump::value(r) + red.g1 * bump::slope_value(r);
      hg[i] += red.g0 * bump::hilbert_even(r) +
               red.g1 * (bump::slope_hilbert_odd(r) + 2.0 / pi * bump::slope_stieltjes(r));
    }
    out[i] = -g + I * hg[i];
  }
  return out;
}

// (1/2 pi^2) int_0^inf K(lambda rho) X(lambda) dlambda with K = e^{-i lambda rho} or sin(lambda rho),
// midpoint rule on the lattice with the lambda = 0 endpoint correction.
std::vector<cplx> WaveOperator::lambda_integral(std::vector<cplx> X, bool sine) const {
  const auto& c = midpoint_end_correction();
  const double scale = lat_.dl / (2.0 * pi * pi);
  for (std::size_t m = 0; m < X.size(); ++m) X[m] *= scale * (1.0 + (m < 6 ? c[m] : 0.0));
  if (!sine) return lat_.to_r(X, -1);
  auto a = lat_.to_r(X, +1);
  const auto b = lat_.to_r(X, -1);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] - b[i]) / (2.0 * I);
  return a;
}

void WaveOperator::add_tail(std::vector<cplx>& w, std::size_t j, const std::vector<Reduced>& red, double L,
                            bool adjoint) const {
  const std::size_t n = cfg_.size();
  bool any = false;
  for (const auto& r : red) any = any || r.g0 != 0.0;
  if (!any) return;
  // (1/2 pi^2) * 16 pi^2 = 8
  for (std::size_t i = 0; i < grid_.n; ++i) {
    const double r = grid_.node(i);
    cplx acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (red[k].g0 == 0.0) continue;
      const double d = k == j ? 0.0 : cfg_.dist(j, k);
      const cplx a = k == j ? cplx(cfg_.alphas[j]) : cplx(-1.0 / (4.0 * pi * d));
      if (adjoint)  // int sin(lambda r) e^{i lambda d} i g0 / lambda^2
        acc += a * I * red[k].g0 * (tail_kernel(r + d, L) - tail_kernel(d - r, L)) / (2.0 * I);
      else  // int e^{-i lambda (r + d)} g0 / lambda^2
        acc += a * red[k].g0 * tail_kernel(-(r + d), L);
    }
    w[i] += 8.0 * acc;
  }
}

namespace {

CentredField with_centres(const CentredField& u, const std::vector<Vec3>& centres) {
  CentredField out = u;
  if (!out.anchored.empty() && out.centres != centres)
    throw ValidationError("field is anchored at a different centre set");
  out.centres = centres;
  return out;
}

}  // namespace

CentredField WaveOperator::apply_plus(const CentredField& u_in, const std::vector<bool>* pairs_mask) const {
  const CentredField u = with_centres(u_in, cfg_.centres);
  const std::size_t n = cfg_.size();
  std::vector<Reduced> red;
  std::vector<std::vector<cplx>> S;
  for (std::size_t k = 0; k < n; ++k) {
    red.push_back(reduce(u, k));
    S.push_back(sine_coeffs(red.back()));
  }
  const std::size_t count = spectral_count(S, opt_.spectral_cut);
  ensure_remainder(count);
  CentredField out = u;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<cplx> X(count, 0.0);
    for (std::size_t m = 0; m < count; ++m) {
      const cplx* f = remainder_.data() + m * n * n + j * n;
      for (std::size_t k = 0; k < n; ++k)
        if (!pairs_mask || (*pairs_mask)[j * n + k]) X[m] += f[k] * S[k][m];
    }
    auto w = lambda_integral(std::move(X), false);
    if (!pairs_mask) add_tail(w, j, red, static_cast<double>(count) * lat_.dl, false);
    if (!pairs_mask || (*pairs_mask)[j * n + j]) {
      const auto cst = constant_forward(red[j]);
      for (std::size_t i = 0; i < grid_.n; ++i) w[i] += cst[i];
    }
    out.anchored.push_back({j, RadialProfile(grid_, std::move(w), Parity::none)});
  }
  return out;
}

CentredField WaveOperator::adjoint_plus(const CentredField& v_in) const {
  const CentredField v = with_centres(v_in, cfg_.centres);
  const std::size_t n = cfg_.size();
  std::vector<Reduced> red;
  std::vector<std::vector<cplx>> E;
  for (std::size_t j = 0; j < n; ++j) {
    red.push_back(reduce(v, j));
    E.push_back(exp_coeffs(red.back()));
  }
  const std::size_t count = spectral_count(E, opt_.spectral_cut);
  ensure_remainder(count);
  CentredField out = v;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<cplx> Y(count, 0.0);
    for (std::size_t m = 0; m < count; ++m) {
      const cplx* f = remainder_.data() + m * n * n;
      for (std::size_t j = 0; j < n; ++j) Y[m] += std::conj(f[j * n + k]) * E[j][m];
    }
    auto w = lambda_integral(std::move(Y), true);
    add_tail(w, k, red, static_cast<double>(count) * lat_.dl, true);
    const auto cst = constant_adjoint(red[k]);
    for (std::size_t i = 0; i < grid_.n; ++i) w[i] += cst[i];
    out.anchored.push_back({k, RadialProfile(grid_, std::move(w), Parity::none)});
  }
  return out;
}

CentredField WaveOperator::apply(const CentredField& u, Sign sign) const {
  if (sign == Sign::plus) return apply_plus(u, nullptr);
  return apply_plus(u.conjugated(), nullptr).conjugated();
}

CentredField WaveOperator::apply(const ScalarField& u, Sign sign) const {
  return apply(CentredField::from(u, cfg_.centres), sign);
}

CentredField WaveOperator::adjoint(const CentredField& v, Sign sign) const {
  if (sign == Sign::plus) return adjoint_plus(v);
  return adjoint_plus(v.conjugated()).conjugated();
}

CentredField WaveOperator::adjoint(const ScalarField& v, Sign sign) const {
  return adjoint(CentredField::from(v, cfg_.centres), sign);
}

RadialProfile WaveOperator::omega(std::size_t j, std::size_t k, const CentredField& u) const {
  const std::size_t n = cfg_.size();
  if (j >= n || k >= n) throw ValidationError("omega: centre index out of range");
  std::vector<bool> mask(n * n, false);
  mask[j * n + k] = true;
  const auto out = apply_plus(u, &mask);
  return out.anchored.at(out.anchored.size() - n + j).reduced;
}

RadialProfile omega_apply(const Configuration& cfg, std::size_t j, std::size_t k, const ScalarField& u,
                          const RadialGrid& grid) {
  return WaveOperator(cfg, grid).omega(j, k, CentredField::from(u, cfg.centres));
}

CentredField wave_apply(const Configuration& cfg, const ScalarField& u, Sign sign, const RadialGrid& grid) {
  return WaveOperator(cfg, grid).apply(u, sign);
}

CentredField wave_adjoint_apply(const Configuration& cfg, const ScalarField& v, Sign sign, const RadialGrid& grid) {
  return WaveOperator(cfg, grid).adjoint(v, sign);
}

CentredField resonant_closed_form(const Configuration& cfg, const ScalarField& u, const RadialGrid& grid) {
  validate(cfg);
  if (cfg.size() != 1 || cfg.alphas[0] != 0.0)
    throw ValidationError("resonant_closed_form needs a single centre with alpha = 0");
  const auto g = reduced_mean(u, cfg.centres[0], grid);
  const auto hg = hilbert_transform(g, Parity::odd);
  std::vector<cplx> w(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) w[i] = -g.values[i] + I * hg.values[i];
  CentredField out = CentredField::from(u, cfg.centres);
  out.anchored.push_back({0, RadialProfile(grid, std::move(w), Parity::none)});
  return out;
}

}  // namespace pint
