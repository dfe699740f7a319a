#include "pointint/lpprobe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pointint/quadrature.hpp"
#include "pointint/radial.hpp"
#include "pointint/resolvent.hpp"
#include "pointint/waveop.hpp"

namespace pint {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("fit_line: need at least two matching points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("fit_line: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

BoundednessTable boundedness_scan(const Configuration& cfg, std::span<const ScalarField> family,
                                  std::span<const double> p_grid, const RadialGrid& grid, const LpOptions& opt) {
  validate(cfg);
  for (double p : p_grid)
    if (!(p >= 1.0)) throw ValidationError("boundedness_scan: p must be >= 1");
  const WaveOperator W(cfg, grid);
  BoundednessTable t;
  t.p_grid.assign(p_grid.begin(), p_grid.end());
  t.max_ratio.assign(p_grid.size(), 0.0);
  t.min_ratio.assign(p_grid.size(), std::numeric_limits<double>::infinity());
  for (std::size_t m = 0; m < family.size(); ++m) {
    const auto out = W.apply(family[m]);
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
      BoundednessRow r{m, p_grid[i], lp_norm(family[m], p_grid[i], opt), lp_norm(out, p_grid[i], opt), 0.0};
      r.ratio = r.norm_out / r.norm_in;
      t.max_ratio[i] = std::max(t.max_ratio[i], r.ratio);
      t.min_ratio[i] = std::min(t.min_ratio[i], r.ratio);
      t.rows.push_back(r);
    }
  }
  return t;
}

std::vector<ScalarField> gaussian_family(const Configuration& cfg, std::size_t count) {
  validate(cfg);
  const Vec3 c = cfg.centres[0];
  std::vector<ScalarField> fam;
  for (std::size_t i = 0; i < count; ++i) {
    const double s = static_cast<double>(i);
    const double width = 0.5 + 0.25 * s;
    const Vec3 off{0.15 * std::cos(1.3 * s) * s, 0.1 * std::sin(0.7 * s) * s, 0.05 * s};
    fam.push_back(ScalarField::gaussian(1.0, 1.0 / (width * width), c + off));
  }
  return fam;
}

namespace {

double smooth_step(double x) {
  auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double a = psi(x), b = psi(1.0 - x);
  return a + b > 0.0 ? a / (a + b) : 0.0;
}

Configuration rescaled(const Configuration& cfg, double eps) {
  Configuration out = cfg;
  for (std::size_t k = 0; k < cfg.size(); ++k) {
    out.centres[k] = cfg.centres[0] + (1.0 / eps) * (cfg.centres[k] - cfg.centres[0]);
    out.alphas[k] = cfg.alphas[k] * eps;
  }
  return out;
}

}  // namespace

double counterexample_profile(double r) {
  r = std::abs(r);
  return smooth_step((counterexample_support - r) / 0.2) / (1.0 + r * r);
}

P1Report p1_blowup_scan(const std::function<double(double)>& f, double support, std::span<const double> R_list,
                        std::span<const double> eps_list, const Configuration& cfg, const P1Options& opt) {
  validate(cfg);
  if (R_list.empty()) throw ValidationError("p1_blowup_scan: empty R list");
  if (!(support > 0.0)) throw ValidationError("p1_blowup_scan: support must be positive");
  for (double R : R_list)
    if (!(R > 0.0)) throw ValidationError("p1_blowup_scan: radii must be positive");
  for (double e : eps_list)
    if (!(e > 0.0)) throw ValidationError("p1_blowup_scan: eps must be positive");

  P1Report rep;
  {
    std::vector<double> edges;
    for (double a = 0.0; a < support; a += 0.05) edges.push_back(a);
    edges.push_back(support);
    const auto rule = composite_gauss(edges, 10);
    double m = 0.0, mabs = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double r = rule.x[i], v = f(r);
      m += rule.w[i] * r * r * v;
      mabs += rule.w[i] * r * r * std::abs(v);
    }
    l1 = 4.0 * pi * mabs;
    rep.moment = 2.0 * m;
    rep.l1 = l1;
    if (std::abs(m) <= 1e-12 * mabs || mabs == 0.0)
      throw ValidationError("p1_blowup_scan: int r^2 f vanishes (degenerate counterexample)");
  }
  rep.stated_slope = 2.0 / pi * rep.moment;
  rep.derived_slope = 4.0 * rep.moment;

  // A(R) on one grid that also covers the support, so the sinc-Hilbert convolution is exact
  // up to sampling and the taper never touches g.
  const double Rmax = *std::max_element(R_list.begin(), R_list.end());
  const double r_max = 1.25 * (std::max(Rmax, support) + 1.0);
  const auto grid = build_grid(r_max, static_cast<std::size_t>(std::ceil(r_max / opt.h)));
  RadialProfile g(grid, Parity::even);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double r = grid.node(i);
    g.values[i] = r * r * f(r);
  }
  const auto Hg = hilbert_transform(g, Parity::even);
  RadialProfile integrand(grid, Parity::none);
  for (std::size_t i = 0; i < grid.n; ++i) integrand.values[i] = std::abs(g.values[i] - I * Hg.values[i]);
  const RunningIntegral running(integrand);
  std::vector<double> logR;
  for (double R : R_list) {
    rep.R.push_back(R);
    rep.A.push_back(4.0 * pi * running(R).real());
    logR.push_back(std::log(R));
  }
  if (R_list.size() >= 2) rep.fit = fit_line(logR, rep.A);

  auto A_at = [&](double R) { return 4.0 * pi * running(R).real(); };
  const Vec3 y1 = cfg.centres[0];
  for (double e : eps_list) {
    const double s = 1.0 / e;
    const auto ue = ScalarField::radial(y1, [&f, s](double r) { return cplx(s * s * s * f(r * s)); }, support * e);
    LpOptions lo = opt.lp;
    lo.panel = 0.01 * e;
    rep.l1_scaled.push_back(lp_norm(ue, 1.0, lo));
  }

  std::vector<double> balls = opt.R_ball;
  if (balls.empty()) balls.push_back(R_list.front());
  const double eps_min = eps_list.empty() ? 0.0 : *std::min_element(eps_list.begin(), eps_list.end());
  const auto u = ScalarField::radial(y1, [&f](double r) { return cplx(f(r)); }, support);
  for (double R : balls) {
    for (double e : eps_list) {
      const auto ce = rescaled(cfg, e);
      double far = 0.0, near = std::numeric_limits<double>::infinity();
      for (std::size_t k = 1; k < ce.size(); ++k) {
        far = std::max(far, distance(ce.centres[k], y1));
        near = std::min(near, distance(ce.centres[k], y1));
      }
      if (near <= R) continue;  // the ball would contain another centre at this scale
      const double rm = 1.25 * (std::max(R, support) + far + 1.0);
      const WaveOperator W(ce, build_grid(rm, static_cast<std::size_t>(std::ceil(rm / opt.wave_h))));
      auto out = W.apply(u);
      out.free.reset();
      P1Row row{e, R, lp_norm_shell(out, 1.0, y1, 0.0, R, opt.lp), A_at(R), 0.0};
      row.rel = std::abs(row.B - row.A) / row.A;
      if (e == eps_min && row.rel > opt.agree_tol) rep.orders_agree = false;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

P3Report p3_blowup_scan(const Configuration& cfg, const ScalarField& u, double c, std::span<const double> delta_list,
                        const P3Options& opt) {
  validate(cfg);
  if (!(c > 0.0)) throw ValidationError("p3_blowup_scan: c must be positive");
  if (opt.centre >= cfg.size()) throw ValidationError("p3_blowup_scan: centre index out of range");
  if (delta_list.empty()) throw ValidationError("p3_blowup_scan: empty delta list");
  double delta0 = opt.delta0;
  if (delta0 <= 0.0) {
    delta0 = 0.5;
    for (std::size_t k = 0; k < cfg.size(); ++k)
      if (k != opt.centre) delta0 = std::min(delta0, 0.5 * cfg.dist(opt.centre, k));
  }
  for (double d : delta_list)
    if (!(d > 0.0) || !(d < delta0)) throw ValidationError("p3_blowup_scan: need 0 < delta < delta0");

  ResolventOptions ro;
  ro.anchor_grid = build_grid(2.0 * delta0 + 1.0, 20000);
  auto res = resolvent_apply(cfg, cplx(0.0, c), u, ro);
  double qmax = 0.0;
  for (Eigen::Index j = 0; j < res.charges.size(); ++j) qmax = std::max(qmax, std::abs(res.charges(j)));
  if (qmax <= 1e-12 * std::max(l2_norm(u), 1e-300))
    throw ValidationError("p3_blowup_scan: all charges vanish (u orthogonal to every Green function)");
  auto D = res.field;
  D.free.reset();

  P3Report rep;
  rep.charge = res.charges(static_cast<Eigen::Index>(opt.centre));
  rep.predicted = 4.0 * pi * std::pow(std::abs(rep.charge) / (4.0 * pi), opt.p);
  std::vector<double> x;
  for (double d : delta_list) {
    rep.delta.push_back(d);
    rep.value.push_back(std::pow(lp_norm_shell(D, opt.p, cfg.centres[opt.centre], d, delta0, opt.lp), opt.p));
    x.push_back(std::log(1.0 / d));
  }
  if (delta_list.size() >= 2) rep.fit = fit_line(x, rep.value);
  return rep;
}

}  // namespace pint
