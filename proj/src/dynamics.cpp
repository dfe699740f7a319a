#include "pointint/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <tbb/parallel_for.h>

#include "pointint/lattice.hpp"
#include "pointint/lpprobe.hpp"
#include "pointint/osc_sum.hpp"
#include "pointint/quadrature.hpp"
#include "pointint/radial.hpp"
#include "pointint/waveop.hpp"

namespace pint {

namespace {

RadialProfile evolve_fft(const RadialProfile& w, double t, const RadialGrid& out) {
  const double h = w.grid.h();
  // content up to the Nyquist wavenumber travels at most 2 (pi / h) |t|
  const double half = std::max(w.grid.r_max, out.r_max) + 2.0 * (pi / h) * std::abs(t) + 10.0 * h;
  const std::size_t M = next_pow2(2 * static_cast<std::size_t>(std::ceil(half / h)));
  if (M > (std::size_t{1} << 25)) throw NumericalError("evolve_reduced: FFT box too large; use a coarser input grid");
  std::vector<cplx> a(M, 0.0);
  for (std::size_t j = 0; j < w.size(); ++j) {
    a[j] = w.values[j];
    a[M - 1 - j] = -w.values[j];  // node -(j + 1/2) h
  }
  fft_inplace(a, -1);
  const double dk = 2.0 * pi / (static_cast<double>(M) * h);
  for (std::size_t k = 0; k < M; ++k) {
    const double kk = (k < M / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(M)) * dk;
    a[k] *= std::exp(cplx(0.0, -kk * kk * t)) / static_cast<double>(M);
  }
  fft_inplace(a, 1);
  a.resize(M / 2);
  const RadialProfile evolved(build_grid(static_cast<double>(M / 2) * h, M / 2), std::move(a), Parity::odd);
  RadialProfile res(out, Parity::odd);
  for (std::size_t i = 0; i < out.n; ++i) res.values[i] = evolved.at(out.node(i));
  return res;
}

RadialProfile evolve_kernel(const RadialProfile& w, double t, const RadialGrid& out) {
  const double h = w.grid.h();
  // the summand e^{i y^2/4t} w(y) e^{+-i x y / 2t} must stay below the Nyquist wavenumber of the input
  const double band = (out.r_max + w.grid.r_max) / (2.0 * std::abs(t));
  if (band > 0.8 * pi / h) {
    std::ostringstream os;
    os << "free propagation: oscillation unresolved (phase rate " << band << " vs Nyquist " << pi / h << ")";
    throw NumericalError(os.str());
  }
  std::vector<cplx> W(w.size());
  for (std::size_t m = 0; m < w.size(); ++m) {
    const double y = w.grid.node(m);
    W[m] = h * std::exp(cplx(0.0, y * y / (4.0 * t))) * w.values[m];
  }
  std::vector<double> tt(out.n);
  for (std::size_t p = 0; p < out.n; ++p) tt[p] = out.node(p) / (2.0 * t);
  std::vector<cplx> plus(out.n), minus(out.n);
  const std::size_t block = 4096;
  tbb::parallel_for(std::size_t{0}, (out.n + block - 1) / block, [&](std::size_t b) {
    const std::size_t lo = b * block, len = std::min(block, out.n - lo);
    const std::span<const double> tb(tt.data() + lo, len);
    osc_sum(tb, W, 0.5 * h, h, 1.0, std::span<cplx>(plus.data() + lo, len));
    osc_sum(tb, W, 0.5 * h, h, -1.0, std::span<cplx>(minus.data() + lo, len));
  });
  const cplx pref = -1.0 / std::sqrt(cplx(0.0, 4.0 * pi * t));
  RadialProfile res(out, Parity::odd);
  for (std::size_t p = 0; p < out.n; ++p) {
    const double x = out.node(p);
    res.values[p] = pref * std::exp(cplx(0.0, x * x / (4.0 * t))) * (plus[p] - minus[p]);
  }
  return res;
}

// (4 pi i t)^{-3/2} int_0^inf 4 pi rho^2 e^{i rho^2 / 4t} M_u(x; rho) d rho
cplx propagate_at(const ScalarField& u, double t, const Vec3& x) {
  const double R = u.extent_about(x);
  if (R <= 0.0) return 0.0;
  const double h = std::min(0.01, 0.5 * 2.0 * std::abs(t) / R);
  const auto n = static_cast<std::size_t>(std::ceil(R / h));
  if (n > 2000000) throw NumericalError("free_propagate: oscillation unresolved (spherical-mean path needs too many nodes)");
  const auto grid = build_grid(R, std::max<std::size_t>(n, 16));
  const auto m = spherical_mean(u, x, grid);
  std::vector<cplx> f(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double r = grid.node(i);
    f[i] = 4.0 * pi * r * r * std::exp(cplx(0.0, r * r / (4.0 * t))) * m.values[i];
  }
  return std::pow(cplx(0.0, 4.0 * pi * t), -1.5) * halfline_sum(f, grid.h());
}

Vec3 term_centre(const FieldTerm& t) {
  return std::visit([](const auto& x) { return x.centre; }, t);
}

}  // namespace

RadialProfile evolve_reduced(const RadialProfile& w, double t, const RadialGrid& out) {
  if (t == 0.0) {
    RadialProfile res(out, w.parity);
    for (std::size_t i = 0; i < out.n; ++i) res.values[i] = w.at(out.node(i));
    return res;
  }
  return std::abs(t) <= kernel_crossover ? evolve_fft(w, t, out) : evolve_kernel(w, t, out);
}

ScalarField free_evolve(const ScalarField& u, double t, const RadialGrid& out) {
  if (t == 0.0) return u;
  ScalarField res;
  for (const auto& term : u.terms()) {
    if (const auto* g = std::get_if<GaussianTerm>(&term)) {
      const cplx f = 1.0 + 4.0 * I * g->b * t;
      GaussianTerm e = *g;
      e.b = g->b / f;
      e.amp = g->amp * std::pow(f, g->axis < 0 ? -1.5 : -2.5);
      res += ScalarField(e);
    } else if (const auto* r = std::get_if<RadialTerm>(&term)) {
      const double hin = std::min(0.01, out.h());
      const auto grid = build_grid(r->extent, std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(r->extent / hin))));
      RadialProfile w(grid, Parity::odd);
      for (std::size_t i = 0; i < grid.n; ++i) {
        const double rho = grid.node(i);
        w.values[i] = rho * eval_term(term, r->centre + Vec3{0.0, 0.0, rho});
      }
      auto wt = std::make_shared<RadialProfile>(evolve_reduced(w, t, out));
      res += ScalarField::radial(r->centre, [wt](double rho) { return anchored_value(*wt, rho); }, out.r_max);
    } else {
      const ScalarField single(term);
      res += ScalarField::generic([single, t](const Vec3& x) { return propagate_at(single, t, x); }, term_centre(term),
                                  out.r_max);
    }
  }
  return res;
}

CentredField free_evolve(const CentredField& f, double t, const RadialGrid& out) {
  CentredField res(f.centres);
  if (f.has_free()) res.free = free_evolve(*f.free, t, out);
  for (const auto& a : f.anchored) res.anchored.push_back({a.centre, evolve_reduced(a.reduced, t, out)});
  return res;
}

std::vector<cplx> free_propagate(const ScalarField& u, double t, std::span<const Vec3> where) {
  std::vector<cplx> vals(where.size());
  if (t == 0.0) {
    for (std::size_t i = 0; i < where.size(); ++i) vals[i] = u(where[i]);
    return vals;
  }
  double reach = 1.0;
  for (const auto& term : u.terms())
    for (const auto& x : where) reach = std::max(reach, distance(x, term_centre(term)));
  const double r = 1.05 * reach + 1.0;
  const auto v = free_evolve(u, t, build_grid(r, static_cast<std::size_t>(std::ceil(r / 0.01))));
  tbb::parallel_for(std::size_t{0}, where.size(), [&](std::size_t i) { vals[i] = v(where[i]); });
  return vals;
}

RadialGrid propagation_grid(const DynamicsOptions& opt, double t) {
  const double r = opt.grid.r_max + 2.0 * opt.kappa * std::abs(t);
  const double h = std::abs(t) <= 1.0 ? opt.grid.h() : std::max(opt.grid.h(), opt.h_out);
  return build_grid(r, static_cast<std::size_t>(std::ceil(r / h)));
}

namespace {

double anchored_mass(const CentredField& f) {
  double m = 0.0;
  for (const auto& a : f.anchored) {
    double part = 0.0;
    for (const cplx& v : a.reduced.values) part += std::norm(v);
    m += 4.0 * pi * a.reduced.grid.h() * part;
  }
  return m;
}

// Free evolution is unitary piece by piece, so anchored mass missing after evolving onto the
// output grid has left through its edge.
CentredField propagate(const Configuration& cfg, const ScalarField& u, double t, const DynamicsOptions& opt,
                       double* lost) {
  validate(cfg);
  const WaveOperator in(cfg, opt.grid);
  const auto a = in.adjoint(u);
  const auto out = propagation_grid(opt, t);
  const auto b = free_evolve(a, t, out);
  if (lost) *lost = std::max(0.0, anchored_mass(a) - anchored_mass(b));
  if (out.n == opt.grid.n && out.r_max == opt.grid.r_max) return in.apply(b);
  return WaveOperator(cfg, out).apply(b);
}

}  // namespace

CentredField interacting_propagate(const Configuration& cfg, const ScalarField& u, double t,
                                   const DynamicsOptions& opt) {
  return propagate(cfg, u, t, opt, nullptr);
}

std::vector<cplx> interacting_propagate(const Configuration& cfg, const ScalarField& u, double t,
                                        std::span<const Vec3> where, const DynamicsOptions& opt) {
  const auto f = interacting_propagate(cfg, u, t, opt);
  std::vector<cplx> vals(where.size());
  tbb::parallel_for(std::size_t{0}, where.size(), [&](std::size_t i) { vals[i] = f(where[i]); });
  return vals;
}

std::vector<double> geometric_times(double t0, double t1, std::size_t per_decade) {
  if (!(t0 > 0.0) || !(t1 > t0) || per_decade == 0) throw ValidationError("geometric_times: need 0 < t0 < t1");
  const auto n = static_cast<std::size_t>(std::ceil(static_cast<double>(per_decade) * std::log10(t1 / t0)));
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = t0 * std::pow(t1 / t0, static_cast<double>(i) / static_cast<double>(n));
  t.back() = t1;
  return t;
}

namespace {

double propagated_norm(const Configuration& cfg, const ScalarField& u, double t, double p, const DynamicsOptions& opt,
                       const LpOptions& lp) {
  double lost = 0.0;
  const auto f = propagate(cfg, u, t, opt, &lost);
  const double frac = lost / std::pow(l2_norm(u), 2);
  if (frac > 1e-3) {
    std::ostringstream os;
    os << "norm evaluation at t = " << t << ": the evolved field runs off the output grid (lost mass fraction " << frac
       << "); increase kappa";
    throw NumericalError(os.str());
  }
  return lp_norm(f, p, lp);
}

void require_window(double p) {
  if (!(p >= 2.0) || !(p < 3.0)) throw ValidationError("p must lie in [2, 3)");
}

}  // namespace

DispersiveFit dispersive_fit(const Configuration& cfg, const ScalarField& u, double p, std::span<const double> t_grid,
                             const DynamicsOptions& opt, const LpOptions& lp) {
  validate(cfg);
  require_window(p);
  if (t_grid.size() < 3) throw ValidationError("dispersive_fit: need at least three times");
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1])))
      throw ValidationError("dispersive_fit: times must be positive and increasing");
  if (std::log10(t_grid.back() / t_grid.front()) < 1.5) throw ValidationError("dispersive_fit: t grid spans < 1.5 decades");
  DispersiveFit fit;
  fit.p = p;
  fit.target = -3.0 * (0.5 - 1.0 / p);
  std::vector<double> lt, ln;
  for (double t : t_grid) {
    const double n = propagated_norm(cfg, u, t, p, opt, lp);
    fit.t.push_back(t);
    fit.norm.push_back(n);
    lt.push_back(std::log(t));
    ln.push_back(std::log(n));
  }
  const auto line = fit_line(lt, ln);
  fit.exponent = line.slope;
  fit.constant = std::exp(line.intercept);
  fit.r2 = line.r2;
  return fit;
}

StrichartzResult strichartz_window_norm(const Configuration& cfg, const ScalarField& u, double p, double T,
                                        const DynamicsOptions& opt, const LpOptions& lp) {
  validate(cfg);
  require_window(p);
  if (!(T > 1.0)) throw ValidationError("strichartz_window_norm: T must exceed 1");
  StrichartzResult r;
  r.p = p;
  r.q = p == 2.0 ? std::numeric_limits<double>::infinity() : 4.0 * p / (3.0 * (p - 2.0));
  r.T = T;
  r.t = geometric_times(1.0 / T, T, 16);
  for (double t : r.t) r.norm.push_back(propagated_norm(cfg, u, t, p, opt, lp));
  if (std::isinf(r.q)) {
    r.value = *std::max_element(r.norm.begin(), r.norm.end());
  } else {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < r.t.size(); ++i) {
      const double ds = std::log(r.t[i + 1] / r.t[i]);
      acc += 0.5 * ds * (std::pow(r.norm[i], r.q) * r.t[i] + std::pow(r.norm[i + 1], r.q) * r.t[i + 1]);
    }
    r.value = std::pow(acc, 1.0 / r.q);
  }
  r.ratio = r.value / l2_norm(u);
  return r;
}

}  // namespace pint
