#include "pointint/radial.hpp"

#include <algorithm>

#include <gsl/gsl_sf_dawson.h>

#include "pointint/osc_sum.hpp"
#include "pointint/quadrature.hpp"

namespace pint {

namespace {

constexpr double kSeriesCut = 1e-4;

// e^{-b(r^2+s^2)} sinh(x)/x with x = 2 b r s, written without overflow.
cplx mean_exp(cplx b, double r, double s) {
  const cplx x = 2.0 * b * r * s;
  const cplx base = std::exp(-b * (r - s) * (r - s));
  if (std::abs(x) < kSeriesCut) return std::exp(-b * (r * r + s * s)) * (1.0 + x * x / 6.0);
  return base * (1.0 - std::exp(-2.0 * x)) / (2.0 * x);
}

// e^{-b(r^2+s^2)} (cosh x / x - sinh x / x^2)
cplx mean_cos_exp(cplx b, double r, double s) {
  const cplx x = 2.0 * b * r * s;
  if (std::abs(x) < kSeriesCut) return std::exp(-b * (r * r + s * s)) * (x / 3.0 + x * x * x / 30.0);
  const cplx base = std::exp(-b * (r - s) * (r - s));
  const cplx e2 = std::exp(-2.0 * x);
  return base * ((1.0 + e2) / (2.0 * x) - (1.0 - e2) / (2.0 * x * x));
}

cplx gaussian_mean(const GaussianTerm& g, const Vec3& centre, double r) {
  const Vec3 sv = centre - g.centre;
  const double s = norm(sv);
  if (g.axis < 0) return g.amp * mean_exp(g.b, r, s);
  if (s == 0.0) return 0.0;
  const auto a = static_cast<std::size_t>(g.axis);
  // mean of (s + r w)_a e^{-b|s + r w|^2}; the w-component along s-hat carries cos(theta) e^{-x cos(theta)}
  return g.amp * (sv[a] * mean_exp(g.b, r, s) - r * (sv[a] / s) * mean_cos_exp(g.b, r, s));
}

std::vector<cplx> quadrature_mean(const ScalarField& u, const Vec3& c, std::span<const double> radii, int order) {
  const auto& gl = gauss_legendre(static_cast<std::size_t>(order));
  const int naz = 2 * order;
  std::vector<Vec3> dirs;
  std::vector<double> wts;
  dirs.reserve(gl.size() * static_cast<std::size_t>(naz));
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double ct = gl.x[i];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int k = 0; k < naz; ++k) {
      const double ph = 2.0 * pi * (k + 0.5) / naz;
      dirs.push_back({st * std::cos(ph), st * std::sin(ph), ct});
      wts.push_back(0.5 * gl.w[i] / naz);
    }
  }
  std::vector<cplx> out(radii.size());
  for (std::size_t n = 0; n < radii.size(); ++n) {
    cplx acc = 0.0;
    for (std::size_t d = 0; d < dirs.size(); ++d) acc += wts[d] * u(c + radii[n] * dirs[d]);
    out[n] = acc;
  }
  return out;
}

std::vector<cplx> adaptive_quadrature_mean(const ScalarField& u, const Vec3& c, const RadialGrid& grid,
                                           int order) {
  const auto radii = grid.nodes();
  std::vector<double> probe;
  const std::size_t stride = std::max<std::size_t>(1, grid.n / 24);
  for (std::size_t i = 0; i < grid.n; i += stride) probe.push_back(radii[i]);
  probe.push_back(radii.back());
  int q = std::max(order, 6);
  auto prev = quadrature_mean(u, c, probe, q);
  for (; q < 512; q *= 2) {
    auto next = quadrature_mean(u, c, probe, 2 * q);
    double diff = 0.0, scale = 1e-300;
    for (std::size_t i = 0; i < probe.size(); ++i) {
      diff = std::max(diff, std::abs(next[i] - prev[i]));
      scale = std::max(scale, std::abs(next[i]));
    }
    if (diff < 1e-9 * std::max(1.0, scale)) break;
    prev = std::move(next);
  }
  return quadrature_mean(u, c, radii, q);
}

}  // namespace

RadialProfile spherical_mean_quadrature(const ScalarField& u, const Vec3& centre, const RadialGrid& grid,
                                        int angular_order) {
  if (angular_order < 6) throw ValidationError("spherical_mean: angular order must be >= 6");
  return RadialProfile(grid, adaptive_quadrature_mean(u, centre, grid, angular_order), Parity::even);
}

RadialProfile spherical_mean(const ScalarField& u, const Vec3& centre, const RadialGrid& grid, int angular_order) {
  if (angular_order < 6) throw ValidationError("spherical_mean: angular order must be >= 6");
  RadialProfile out(grid, Parity::even);
  ScalarField rest;
  const auto radii = grid.nodes();
  for (const auto& t : u.terms()) {
    if (const auto* g = std::get_if<GaussianTerm>(&t)) {
      for (std::size_t i = 0; i < grid.n; ++i) out.values[i] += gaussian_mean(*g, centre, radii[i]);
    } else if (const auto* r = std::get_if<RadialTerm>(&t); r && distance(r->centre, centre) == 0.0) {
      for (std::size_t i = 0; i < grid.n; ++i) {
        const cplx v = r->amp * (*r->profile)(radii[i]);
        out.values[i] += r->conjugate ? std::conj(v) : v;
      }
    } else {
      rest += ScalarField(t, u.decay());
    }
  }
  if (!rest.empty()) {
    const auto q = adaptive_quadrature_mean(rest, centre, grid, angular_order);
    for (std::size_t i = 0; i < grid.n; ++i) out.values[i] += q[i];
  }
  return out;
}

RunningIntegral::RunningIntegral(RadialProfile w) : w_(std::move(w)), edges_(w_.grid.n + 1, 0.0) {
  const double h = w_.grid.h();
  const auto& gl = gauss_legendre(6);
  for (std::size_t k = 0; k < w_.grid.n; ++k) {
    cplx acc = 0.0;
    for (std::size_t q = 0; q < gl.size(); ++q) acc += gl.w[q] * w_.at((k + 0.5 + 0.5 * gl.x[q]) * h);
    edges_[k + 1] = edges_[k] + 0.5 * h * acc;
  }
}

cplx RunningIntegral::operator()(double s) const {
  const double h = w_.grid.h();
  if (s >= w_.grid.r_max) return edges_.back();
  if (s <= 0.0) return 0.0;
  const auto k = static_cast<std::size_t>(s / h);
  const double a = static_cast<double>(k) * h;
  const auto& gl = gauss_legendre(6);
  cplx acc = 0.0;
  for (std::size_t q = 0; q < gl.size(); ++q) acc += gl.w[q] * w_.at(a + 0.5 * (s - a) * (1.0 + gl.x[q]));
  return edges_[k] + 0.5 * (s - a) * acc;
}

cplx two_centre_reduced_mean(const RunningIntegral& w, double d, double r) {
  return (w(r + d) - w(std::abs(r - d))) / (2.0 * d);
}

std::vector<cplx> two_centre_reduced_mean(const RadialProfile& reduced, double d, const RadialGrid& grid) {
  const RunningIntegral w(reduced);
  std::vector<cplx> g(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) g[i] = two_centre_reduced_mean(w, d, grid.node(i));
  return g;
}

RadialProfile reduced_mean(const ScalarField& u, const Vec3& centre, const RadialGrid& grid) {
  auto m = spherical_mean(u, centre, grid);
  for (std::size_t i = 0; i < grid.n; ++i) m.values[i] *= grid.node(i);
  m.parity = Parity::odd;
  return m;
}

RadialProfile reduced_mean(const CentredField& f, const Vec3& centre, const RadialGrid& grid) {
  RadialProfile g(grid, Parity::odd);
  if (f.has_free()) g = reduced_mean(*f.free, centre, grid);
  for (const auto& piece : f.anchored) {
    const double d = distance(f.centres.at(piece.centre), centre);
    if (d == 0.0) {
      g.parity = Parity::none;
      const bool same = piece.reduced.grid.n == grid.n && piece.reduced.grid.r_max == grid.r_max;
      for (std::size_t i = 0; i < grid.n; ++i)
        g.values[i] += same ? piece.reduced.values[i] : piece.reduced.at(grid.node(i));
    } else {
      const auto add = two_centre_reduced_mean(piece.reduced, d, grid);
      for (std::size_t i = 0; i < grid.n; ++i) g.values[i] += add[i];
    }
  }
  return g;
}

void apply_taper(std::span<cplx> v, double fraction) {
  const std::size_t n = v.size();
  const auto m = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  if (m == 0) return;
  for (std::size_t k = 0; k < m; ++k) {
    // k = 0 is the outermost sample
    const double x = (static_cast<double>(k) + 0.5) / static_cast<double>(m);
    v[n - 1 - k] *= 0.5 * (1.0 - std::cos(pi * x));
  }
}

std::vector<cplx> halfline_fourier(const RadialProfile& g, std::span<const double> lambda) {
  std::vector<cplx> w = g.values;
  apply_taper(w);
  const double h = g.grid.h();
  for (auto& v : w) v *= h;
  std::vector<cplx> plus(lambda.size()), minus(lambda.size());
  osc_sum(lambda, w, 0.5 * h, h, +1.0, plus);
  if (g.parity == Parity::none) {
    const auto& c = midpoint_end_correction();
    for (std::size_t m = 0; m < lambda.size(); ++m)
      for (std::size_t i = 0; i < 6 && i < w.size(); ++i)
        plus[m] += c[i] * w[i] * std::exp(I * lambda[m] * g.grid.node(i));
    return plus;
  }
  osc_sum(lambda, w, 0.5 * h, h, -1.0, minus);
  const double s = g.parity == Parity::odd ? -1.0 : 1.0;
  for (std::size_t m = 0; m < lambda.size(); ++m) plus[m] += s * minus[m];
  return plus;
}

RadialProfile hilbert_transform(const RadialProfile& g, Parity extension) {
  if (extension == Parity::none) throw ValidationError("hilbert_transform needs an even or odd extension");
  std::vector<cplx> v = g.values;
  apply_taper(v);
  auto out = sinc_hilbert(v, extension);
  return RadialProfile(g.grid, std::move(out), extension == Parity::even ? Parity::odd : Parity::even);
}

cplx stieltjes_halfline(const std::function<cplx(double)>& g, double r, double end, double max_panel) {
  if (!(r > 0.0)) throw ValidationError("stieltjes_halfline: r must be positive");
  const auto& gl = gauss_legendre(10);
  cplx acc = 0.0;
  double a = 0.0, w = std::min(r, max_panel);
  while (a < end) {
    const double b = std::min(end, a + w);
    for (std::size_t q = 0; q < gl.size(); ++q) {
      const double s = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[q];
      acc += 0.5 * (b - a) * gl.w[q] * g(s) / (r + s);
    }
    a = b;
    w = std::min(max_panel, 2.0 * w);
  }
  return acc;
}

std::vector<cplx> stieltjes_halfline(const RadialProfile& g) {
  const double h = g.grid.h();
  const std::size_t n = g.grid.n;
  const auto& c = midpoint_end_correction();
  // Split g = g chi + g (1 - chi) with chi a smooth step around 32 h. The far piece vanishes
  // near s = 0, so the midpoint rule is accurate for every r; with nodes r_i, s_k the kernel
  // is 1/(h (i + k + 1)), a Hankel sum done by one FFT convolution.
  const double mid = 32.0 * h, width = 5.0 * h;
  std::vector<double> chi(n);
  for (std::size_t k = 0; k < n; ++k) chi[k] = 0.5 * std::erfc((g.grid.node(k) - mid) / width);
  std::size_t near_count = 0;
  while (near_count < n && chi[near_count] > 1e-17) ++near_count;

  const std::size_t M = next_pow2(3 * n);
  std::vector<cplx> a(M, 0.0), kern(M, 0.0);
  for (std::size_t k = 0; k < n; ++k) a[n - 1 - k] = g.values[k] * (1.0 - chi[k]);
  for (std::size_t m = 0; m < 2 * n; ++m) kern[m] = 1.0 / static_cast<double>(m + 1);
  fft_inplace(a, -1);
  fft_inplace(kern, -1);
  for (std::size_t m = 0; m < M; ++m) a[m] *= kern[m];
  fft_inplace(a, +1);

  std::vector<cplx> out(n);
  const double inv = 1.0 / static_cast<double>(M);
  RadialProfile near = g;
  for (std::size_t k = 0; k < n; ++k) near.values[k] *= chi[k];
  const double near_end = g.grid.node(std::min(n - 1, near_count)) + h;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.grid.node(i);
    cplx far = a[i + n - 1] * inv;  // already carries h / h
    if (r < 4.0 * near_end) {
      out[i] = far + stieltjes_halfline([&](double s) { return near.at(s); }, r, near_end, 4.0 * h);
    } else {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < near_count; ++k) acc += near.values[k] / (r + g.grid.node(k));
      for (std::size_t k = 0; k < 6; ++k) acc += c[k] * near.values[k] / (r + g.grid.node(k));
      out[i] = far + h * acc;
    }
  }
  return out;
}

namespace bump {
double value(double r) { return std::exp(-r * r); }
double sine_transform(double lambda) { return gsl_sf_dawson(0.5 * lambda); }
double cosine_transform(double lambda) { return 0.5 * std::sqrt(pi) * std::exp(-0.25 * lambda * lambda); }
double hilbert_even(double r) { return 2.0 / std::sqrt(pi) * gsl_sf_dawson(r); }
double stieltjes(double r) {
  if (r > 40.0) {
    // sum_n (-1)^n m_n / r^{n+1}, m_n = Gamma((n+1)/2) / 2
    double acc = 0.0, rp = r;
    for (int k = 0; k < 14; ++k, rp *= r) acc += ((k % 2) ? -0.5 : 0.5) * std::tgamma(0.5 * (k + 1)) / rp;
    return acc;
  }
  return stieltjes_halfline([](double s) { return cplx(std::exp(-s * s)); }, r, 9.0, 0.25).real();
}
double slope_value(double r) { return r * std::exp(-r * r); }
double slope_sine_transform(double lambda) { return 0.25 * std::sqrt(pi) * lambda * std::exp(-0.25 * lambda * lambda); }
double slope_cosine_transform(double lambda) { return 0.5 * (1.0 - lambda * gsl_sf_dawson(0.5 * lambda)); }
double slope_hilbert_odd(double r) { return r * hilbert_even(r) - 1.0 / std::sqrt(pi); }
double slope_stieltjes(double r) {
  if (r > 40.0) {
    // sum_n (-1)^n m_{n+1} / r^{n+1}
    double acc = 0.0, rp = r;
    for (int k = 0; k < 14; ++k, rp *= r) acc += ((k % 2) ? -0.5 : 0.5) * std::tgamma(0.5 * (k + 2)) / rp;
    return acc;
  }
  return 0.5 * std::sqrt(pi) - r * stieltjes(r);
}
}  // namespace bump

PeeledProfile peel_origin(const RadialProfile& g) {
  PeeledProfile p{0.0, 0.0, g};
  if (g.parity == Parity::odd) return p;
  if (g.grid.n < 4) throw ValidationError("peel_origin: need at least four nodes");
  // value and slope at 0 of the cubic through the first four nodes
  std::array<double, 4> x{};
  for (std::size_t i = 0; i < 4; ++i) x[i] = g.grid.node(i);
  for (std::size_t i = 0; i < 4; ++i) {
    double l0 = 1.0, dsum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      if (k == i) continue;
      l0 *= (0.0 - x[k]) / (x[i] - x[k]);
      dsum += 1.0 / (0.0 - x[k]);
    }
    p.g0 += l0 * g.values[i];
    p.g1 += l0 * dsum * g.values[i];
  }
  for (std::size_t i = 0; i < g.grid.n; ++i) {
    const double r = g.grid.node(i);
    p.rest.values[i] -= p.g0 * bump::value(r) + p.g1 * bump::slope_value(r);
  }
  p.rest.parity = Parity::odd;
  return p;
}

}  // namespace pint
