#include "pointint/shrink.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_odeiv2.h>
#include <gsl/gsl_spline.h>
#include <tbb/parallel_for.h>

#include "pointint/quadrature.hpp"

namespace pint {

namespace {

cplx sinc(cplx z) {
  if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0;
  return std::sin(z) / z;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// sin(x) / x for the spherical Bessel j0.
double j0(double x) { return sinc(x); }

// e^{i mu r_>} sin(mu r_<) / mu.
cplx free_kernel(cplx mu, double r, double s) {
  const double lo = std::min(r, s), hi = std::max(r, s);
  if (mu.imag() * lo < 300.0) return std::exp(I * mu * hi) * lo * sinc(mu * lo);
  return (std::exp(I * mu * (hi + lo)) - std::exp(I * mu * (hi - lo))) / (2.0 * I * mu);
}

QuadRule input_rule(double extent, std::size_t panels) {
  std::vector<double> edges(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) edges[i] = extent * static_cast<double>(i) / static_cast<double>(panels);
  return composite_gauss(edges, 16);
}

std::vector<double> uniform_edges(double a, double b, std::size_t panels) {
  std::vector<double> e(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) e[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
  return e;
}

// Edges from a to b starting at width w0, growing by `ratio`, never wider than cap.
std::vector<double> growing_edges(double a, double b, double w0, double ratio, double cap) {
  std::vector<double> e{a};
  double w = w0;
  while (e.back() < b) {
    e.push_back(std::min(b, e.back() + std::min(w, cap)));
    w *= ratio;
  }
  return e;
}

// Running integrals int_0^{x_i} of sin(nu t) t f(t) and e^{i nu t} t f(t) at increasing x_i.
void running_moments(const RadialInput& f, double nu, std::span<const double> x, std::span<cplx> S, std::span<cplx> J) {
  const auto& gl = gauss_legendre(8);
  cplx s = 0.0, j = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double top = std::min(x[i], f.extent);
    if (top > prev) {
      // Subdivide so that each piece sees at most one radian of phase and a small share of the extent.
      const double len = top - prev;
      const auto pieces = static_cast<std::size_t>(
          std::ceil(len / std::min(1.0 / std::max(std::abs(nu), 1e-300), f.extent / 64.0)));
      const double step = len / static_cast<double>(std::max<std::size_t>(pieces, 1));
      for (std::size_t p = 0; p < std::max<std::size_t>(pieces, 1); ++p) {
        const double a = prev + step * static_cast<double>(p);
        for (std::size_t q = 0; q < gl.size(); ++q) {
          const double t = a + 0.5 * step * (gl.x[q] + 1.0);
          const cplx g = 0.5 * step * gl.w[q] * t * f.f(t);
          s += std::sin(nu * t) * g;
          j += std::exp(I * (nu * t)) * g;
        }
      }
      prev = top;
    }
    S[i] = s;
    J[i] = j;
  }
}

}  // namespace

RadialPotential RadialPotential::square_well(double depth, double radius) {
  if (!(radius > 0.0) || !std::isfinite(depth)) throw ValidationError("square_well: radius must be positive");
  RadialPotential p;
  p.V = [depth](double) { return depth; };
  p.support = radius;
  return p;
}

RadialPotential RadialPotential::sampled(std::vector<double> r, std::vector<double> values) {
  if (r.size() != values.size() || r.size() < 3) throw ValidationError("sampled potential: need >= 3 matching samples");
  if (r.front() < 0.0) throw ValidationError("sampled potential: radii must be non-negative");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1])) throw ValidationError("sampled potential: radii must increase");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("sampled potential: non-finite value");
  std::shared_ptr<gsl_spline> spline(gsl_spline_alloc(gsl_interp_cspline, r.size()), gsl_spline_free);
  gsl_spline_init(spline.get(), r.data(), values.data(), r.size());
  RadialPotential p;
  const double lo = r.front(), hi = r.back();
  p.V = [spline, lo, hi](double x) { return gsl_spline_eval(spline.get(), std::clamp(x, lo, hi), nullptr); };
  p.support = hi;
  return p;
}

double tuned_well_depth(double radius) { return -std::pow(pi / (2.0 * radius), 2); }

double ResonanceData::operator()(double r) const {
  r = std::abs(r);
  return r < support ? phi.at(r).real() : tail / r;
}

namespace {

struct OdeParams {
  const RadialPotential* V;
};

// y = (u, u', int V u^2, int V u r).
int zero_energy_rhs(double r, const double y[], double dy[], void* params) {
  const auto* p = static_cast<OdeParams*>(params);
  const double v = p->V->V(r);
  dy[0] = y[1];
  dy[1] = v * y[0];
  dy[2] = v * y[0] * y[0];
  dy[3] = v * y[0] * r;
  return GSL_SUCCESS;
}

}  // namespace

ResonanceData resonance_function(const RadialPotential& V, const ShrinkOptions& opt) {
  if (!V.V || !(V.support > 0.0)) throw ValidationError("resonance_function: empty potential");
  if (opt.phi_nodes < 16) throw ValidationError("resonance_function: need at least 16 samples");
  const auto grid = build_grid(V.support, opt.phi_nodes);
  std::vector<double> stops = grid.nodes();
  for (double b : V.breaks)
    if (b > 0.0 && b < V.support) stops.push_back(b);
  stops.push_back(V.support);
  std::sort(stops.begin(), stops.end());
  std::vector<double> breaks = V.breaks;
  std::sort(breaks.begin(), breaks.end());

  OdeParams params{&V};
  gsl_odeiv2_system sys{zero_energy_rhs, nullptr, 4, &params};
  std::unique_ptr<gsl_odeiv2_driver, decltype(&gsl_odeiv2_driver_free)> drv(
      gsl_odeiv2_driver_alloc_y_new(&sys, gsl_odeiv2_step_rk8pd, 1e-3 * grid.h(), 1e-14, 1e-13),
      gsl_odeiv2_driver_free);
  double r = 0.0;
  double y[4] = {0.0, 1.0, 0.0, 0.0};
  std::vector<double> u_at(grid.n);
  std::size_t next_node = 0, next_break = 0;
  for (double stop : stops) {
    if (stop > r) {
      if (gsl_odeiv2_driver_apply(drv.get(), &r, stop, y) != GSL_SUCCESS)
        throw NumericalError("resonance_function: zero-energy integration failed");
    }
    if (next_node < grid.n && stop == grid.node(next_node)) u_at[next_node++] = y[0];
    while (next_break < breaks.size() && breaks[next_break] <= stop) {
      if (breaks[next_break] == stop) gsl_odeiv2_driver_reset(drv.get());
      ++next_break;
    }
  }

  ResonanceData d;
  d.support = V.support;
  d.mismatch = y[0] != 0.0 ? V.support * y[1] / y[0] : std::numeric_limits<double>::infinity();
  if (!(std::abs(d.mismatch) <= opt.resonance_tol)) {
    std::ostringstream os;
    os << "no zero-energy resonance: support * u'/u at the edge is " << d.mismatch << " (tolerance "
       << opt.resonance_tol << "); tune the depth";
    throw ValidationError(os.str());
  }
  if (!(y[2] < 0.0)) throw ValidationError("resonance_function: int V u^2 >= 0, the normalisation needs an attractive well");
  double c = 1.0 / std::sqrt(-4.0 * pi * y[2]);
  if (std::abs(y[3]) <= 1e-14 * std::sqrt(std::abs(y[2])) * V.support)
    throw ValidationError("resonance_function: int V phi vanishes");
  if (y[3] * c < 0.0) c = -c;
  d.a = 4.0 * pi * c * y[3];
  d.norm_check = 4.0 * pi * c * c * y[2];
  d.tail = c * y[0];
  d.phi = RadialProfile(grid, Parity::even);
  for (std::size_t i = 0; i < grid.n; ++i) d.phi.values[i] = c * u_at[i] / grid.node(i);
  return d;
}

RadialInput radial_gaussian(cplx amp, double b) {
  if (!(b > 0.0)) throw ValidationError("radial_gaussian: b must be positive");
  RadialInput u;
  u.f = [amp, b](double r) { return amp * std::exp(-b * r * r); };
  u.extent = std::sqrt(40.0 / b);
  u.band = std::sqrt(160.0 * b);
  return u;
}

RadialInput dilate(const RadialInput& u, double s) {
  if (!(s > 0.0)) throw ValidationError("dilate: scale must be positive");
  RadialInput out;
  const double amp = std::pow(s, -1.5);
  out.f = [f = u.f, amp, s](double r) { return amp * f(r / s); };
  out.extent = u.extent * s;
  out.band = u.band / s;
  return out;
}

double radial_l2(const RadialInput& u) { return std::sqrt(radial_inner(u, u).real()); }

cplx radial_inner(const RadialInput& u, const RadialInput& v) {
  const auto rule = input_rule(std::min(u.extent, v.extent), 256);
  cplx s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.x[i];
    s += rule.w[i] * r * r * std::conj(u.f(r)) * v.f(r);
  }
  return 4.0 * pi * s;
}

std::vector<cplx> s_wave_free_apply(cplx mu, const RadialInput& h, std::span<const double> r) {
  if (mu.imag() < 0.0) throw ValidationError("s_wave_free_apply: Im mu must be >= 0");
  std::vector<cplx> out(r.size());
  tbb::parallel_for(std::size_t{0}, r.size(), [&](std::size_t i) {
    const double x = r[i];
    if (!(x > 0.0)) throw ValidationError("s_wave_free_apply: radii must be positive");
    std::vector<double> edges = uniform_edges(0.0, h.extent, 256);
    if (x < h.extent) {
      edges.push_back(x);
      std::sort(edges.begin(), edges.end());
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }
    const auto rule = composite_gauss(edges, 16);
    cplx s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) s += rule.w[q] * free_kernel(mu, x, rule.x[q]) * rule.x[q] * h.f(rule.x[q]);
    out[i] = s / x;
  });
  return out;
}

LsSystem::LsSystem(const RadialPotential& V, cplx mu, const ShrinkOptions& opt) : V_(V), mu_(mu), order_(opt.order) {
  if (!V.V || !(V.support > 0.0)) throw ValidationError("LsSystem: empty potential");
  if (mu.imag() < 0.0) throw ValidationError("LsSystem: Im mu must be >= 0");
  if (opt.panels == 0 || opt.order < 2) throw ValidationError("LsSystem: need panels >= 1, order >= 2");
  edges_ = uniform_edges(0.0, V.support, opt.panels);
  for (double b : V.breaks)
    if (b > 0.0 && b < V.support) edges_.push_back(b);
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  const auto rule = composite_gauss(edges_, order_);
  t_ = rule.x;
  w_ = rule.w;
  v_.resize(t_.size());
  for (std::size_t j = 0; j < t_.size(); ++j) v_[j] = V.V(t_[j]);

  const auto n = static_cast<Eigen::Index>(t_.size());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n);
  tbb::parallel_for(Eigen::Index{0}, n, [&](Eigen::Index i) {
    std::vector<cplx> row(t_.size());
    kernel_row(t_[static_cast<std::size_t>(i)], row);
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) += row[static_cast<std::size_t>(j)];
  });
  lu_.compute(A);
  rcond_ = lu_.rcond();
  if (!(rcond_ > 1e-14)) {
    std::ostringstream os;
    os << "singular Lippmann-Schwinger system at mu = " << mu << " (rcond " << rcond_ << ")";
    throw NumericalError(os.str());
  }
}

cplx LsSystem::kernel(double r, double s) const { return free_kernel(mu_, r, s); }

void LsSystem::kernel_row(double r, std::span<cplx> row) const {
  std::fill(row.begin(), row.end(), cplx(0.0));
  const auto& gl = gauss_legendre(order_);
  std::vector<double> lw(order_);
  for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
    const double a = edges_[p], b = edges_[p + 1];
    const std::size_t base = p * order_;
    if (r <= a || r >= b) {
      for (std::size_t j = base; j < base + order_; ++j) row[j] += w_[j] * kernel(r, t_[j]) * v_[j];
      continue;
    }
    const std::span<const double> local(t_.data() + base, order_);
    for (const auto& [lo, hi] : {std::pair{a, r}, std::pair{r, b}}) {
      for (std::size_t q = 0; q < order_; ++q) {
        const double s = lo + 0.5 * (hi - lo) * (gl.x[q] + 1.0);
        const cplx kv = 0.5 * (hi - lo) * gl.w[q] * kernel(r, s) * V_.V(s);
        lagrange_weights(local, s, lw);
        for (std::size_t j = 0; j < order_; ++j) row[base + j] += kv * lw[j];
      }
    }
  }
}

Eigen::VectorXcd LsSystem::solve(const Eigen::VectorXcd& f) const {
  if (f.size() != static_cast<Eigen::Index>(t_.size())) throw ValidationError("LsSystem::solve: size mismatch");
  Eigen::VectorXcd rhs(f.size());
  for (Eigen::Index j = 0; j < f.size(); ++j) rhs(j) = t_[static_cast<std::size_t>(j)] * f(j);
  return lu_.solve(rhs);
}

cplx LsSystem::apply_g0v(const Eigen::VectorXcd& x, double r) const {
  std::vector<cplx> row(t_.size());
  kernel_row(r, row);
  cplx s = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * x(static_cast<Eigen::Index>(j));
  return s / r;
}

RadialProfile ls_resolvent_apply(const RadialPotential& V, cplx mu, const RadialProfile& f, const ShrinkOptions& opt) {
  const LsSystem sys(V, mu, opt);
  const auto t = sys.nodes();
  Eigen::VectorXcd fn(static_cast<Eigen::Index>(t.size()));
  for (std::size_t j = 0; j < t.size(); ++j) fn(static_cast<Eigen::Index>(j)) = f.at(t[j]);
  const auto x = sys.solve(fn);
  RadialProfile out(f.grid, f.parity);
  tbb::parallel_for(std::size_t{0}, f.size(), [&](std::size_t i) {
    out.values[i] = f.values[i] - sys.apply_g0v(x, f.grid.node(i));
  });
  return out;
}

namespace {

double weighted(double r, double beta) { return r * r * std::pow(1.0 + r * r, -beta); }

// Largest sqrt(nu) with M c = nu G c on the span where G is numerically non-singular.
double generalized_norm(const Eigen::MatrixXd& G, const Eigen::MatrixXcd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eg(G);
  const auto& ev = eg.eigenvalues();
  const double top = ev.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-12 * top) keep.push_back(i);
  Eigen::MatrixXcd P(G.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    P.col(static_cast<Eigen::Index>(k)) = eg.eigenvectors().col(keep[k]).cast<cplx>() / std::sqrt(ev(keep[k]));
  const Eigen::MatrixXcd B = P.adjoint() * M * P;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eb(0.5 * (B + B.adjoint()));
  return std::sqrt(std::max(0.0, eb.eigenvalues().maxCoeff()));
}

double op_bound_distance(const RadialInput& u, double eps, double nu, double beta) {
  // q(r) = eps^{1/2} (G0(eps nu) U_eps^* u)(r) - E, E = int e^{i nu t} t u dt.
  const double mu = eps * nu;
  const double far = 100.0 * u.extent / eps;
  const auto edges = growing_edges(0.0, far, 0.05, 1.15, std::min(1.0 / std::abs(mu), u.extent / (16.0 * eps)));
  const auto rule = composite_gauss(edges, 16);
  std::vector<double> x(rule.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = eps * rule.x[i];
  std::vector<cplx> S(x.size()), J(x.size());
  running_moments(u, nu, x, S, J);
  const cplx E = J.back();
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.x[i];
    const cplx g = (std::exp(I * (mu * r)) * S[i] + std::sin(mu * r) * (E - J[i])) / (mu * r);
    acc += rule.w[i] * weighted(r, beta) * std::norm(g - E);
  }
  acc += std::norm(E) * std::pow(far, 3.0 - 2.0 * beta) / (2.0 * beta - 3.0);
  return std::sqrt(4.0 * pi * acc);
}

}  // namespace

RankOneCurve rank_one_limit_check(const RadialPotential& V, double lambda, std::span<const double> eps_list, double beta,
                                  const RankOneOptions& opt) {
  if (!(lambda > 0.0)) throw ValidationError("rank_one_limit_check: lambda must be positive");
  if (!(beta > 1.5) || !(beta < 0.5 * V.decay)) throw ValidationError("rank_one_limit_check: beta must lie in (3/2, decay/2)");
  if (eps_list.empty()) throw ValidationError("rank_one_limit_check: empty eps list");
  for (double e : eps_list)
    if (!(e > 0.0)) throw ValidationError("rank_one_limit_check: eps must be positive");
  if (opt.probes < 2 || !(opt.s_min > 0.0) || !(opt.s_max > opt.s_min))
    throw ValidationError("rank_one_limit_check: bad probe basis");
  const auto res = resonance_function(V, opt.shrink);

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> jit(-opt.jitter, opt.jitter);
  std::vector<double> widths(opt.probes);
  for (std::size_t m = 0; m < opt.probes; ++m) {
    const double frac = static_cast<double>(m) / static_cast<double>(opt.probes - 1);
    widths[m] = opt.s_min * std::pow(opt.s_max / opt.s_min, frac) * (1.0 + jit(rng));
  }
  auto probe = [&](std::size_t m, double r) {
    return std::pow(1.0 + r * r, 0.5 * beta) * std::exp(-std::pow(r / widths[m], 2));
  };

  RankOneCurve curve;
  curve.lambda = lambda;
  curve.beta = beta;
  curve.a = res.a;
  const cplx coef = 4.0 * pi * I / (lambda * res.a * res.a);
  const auto P = static_cast<Eigen::Index>(opt.probes);

  for (double eps : eps_list) {
    const cplx mu = -eps * lambda;
    const LsSystem sys(V, mu, opt.shrink);
    const auto t = sys.nodes();
    const auto w = sys.weights();
    const auto vv = sys.potential();
    const auto n = t.size();
    const auto outer = composite_gauss(
        growing_edges(V.support, opt.r_far, 0.25, 1.1, std::min(10.0, 1.0 / std::abs(mu))), 16);
    const std::size_t total = n + outer.size();
    std::vector<double> rq(total), wq(total);
    for (std::size_t j = 0; j < n; ++j) {
      rq[j] = t[j];
      wq[j] = 4.0 * pi * w[j] * weighted(t[j], beta);
    }
    for (std::size_t j = 0; j < outer.size(); ++j) {
      rq[n + j] = outer.x[j];
      wq[n + j] = 4.0 * pi * outer.w[j] * weighted(outer.x[j], beta);
    }
    std::vector<double> phi(total);
    for (std::size_t j = 0; j < total; ++j) phi[j] = res(rq[j]);

    Eigen::MatrixXd B(static_cast<Eigen::Index>(total), P);
    Eigen::MatrixXcd D(static_cast<Eigen::Index>(total), P), T(static_cast<Eigen::Index>(total), P);
    tbb::parallel_for(Eigen::Index{0}, P, [&](Eigen::Index m) {
      Eigen::VectorXcd f(static_cast<Eigen::Index>(n));
      cplx pair = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double b = probe(static_cast<std::size_t>(m), t[j]);
        f(static_cast<Eigen::Index>(j)) = b;
        pair += w[j] * vv[j] * phi[j] * b * t[j] * t[j];
      }
      pair *= 4.0 * pi;
      const auto x = sys.solve(f);
      cplx C = 0.0;
      for (std::size_t j = 0; j < n; ++j) C += w[j] * t[j] * sinc(mu * t[j]) * vv[j] * x(static_cast<Eigen::Index>(j));
      for (std::size_t j = 0; j < total; ++j) {
        const double r = rq[j];
        const double b = probe(static_cast<std::size_t>(m), r);
        const cplx psi = j < n ? x(static_cast<Eigen::Index>(j)) / r : b - std::exp(I * mu * r) * C / r;
        const auto row = static_cast<Eigen::Index>(j);
        B(row, m) = b;
        T(row, m) = coef * phi[j] * pair;
        D(row, m) = eps * psi - T(row, m);
      }
    });
    const Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(wq.data(), static_cast<Eigen::Index>(total));
    const Eigen::MatrixXd G = B.transpose() * wv.asDiagonal() * B;
    const Eigen::MatrixXcd M = D.adjoint() * wv.asDiagonal() * D;
    curve.eps.push_back(eps);
    curve.residual.push_back(generalized_norm(G, M));
    if (curve.target_norm == 0.0) curve.target_norm = generalized_norm(G, T.adjoint() * wv.asDiagonal() * T);
    if (opt.diagnostic_input) {
      curve.diagnostic_plus.push_back(op_bound_distance(*opt.diagnostic_input, eps, lambda, beta));
      curve.diagnostic_minus.push_back(op_bound_distance(*opt.diagnostic_input, eps, -lambda, beta));
    }
  }
  // Ordered by decreasing eps, the residuals must decrease strictly.
  std::vector<std::size_t> order(curve.eps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return curve.eps[a] > curve.eps[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (!(curve.residual[order[i]] < curve.residual[order[i - 1]])) curve.strictly_decreasing = false;
  return curve;
}

cplx weps_integrand(const RadialPotential& V, double eps, const RadialInput& u, const RadialInput& v, double lambda,
                    const ShrinkOptions& opt) {
  if (!(eps > 0.0) || !(lambda > 0.0)) throw ValidationError("weps_integrand: eps and lambda must be positive");
  const LsSystem sys(V, cplx(-eps * lambda, 0.0), opt);
  const auto t = sys.nodes();
  const auto w = sys.weights();
  const auto vv = sys.potential();
  const auto n = t.size();

  // int_0^inf j0(lambda t) u(t) t^2 dt and int_0^inf e^{i lambda t} t v dt.
  const auto ru = input_rule(u.extent, 64);
  cplx ut = 0.0;
  for (std::size_t q = 0; q < ru.size(); ++q) ut += ru.w[q] * j0(lambda * ru.x[q]) * u.f(ru.x[q]) * ru.x[q] * ru.x[q];
  const auto rv = input_rule(v.extent, 64);
  cplx Ev = 0.0;
  for (std::size_t q = 0; q < rv.size(); ++q) Ev += rv.w[q] * std::exp(I * (lambda * rv.x[q])) * rv.x[q] * v.f(rv.x[q]);

  const double mu = eps * lambda;
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j)
    rhs(static_cast<Eigen::Index>(j)) = 2.0 * I * mu * j0(mu * t[j]) * std::pow(eps, -1.5) * ut;
  const auto x = sys.solve(rhs);

  std::vector<double> xs(n);
  for (std::size_t j = 0; j < n; ++j) xs[j] = eps * t[j];
  std::vector<cplx> S(n), J(n);
  running_moments(v, lambda, xs, S, J);
  cplx acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double r = t[j];
    const cplx g =
        (std::exp(I * (mu * r)) * S[j] + std::sin(mu * r) * (Ev - J[j])) / (std::sqrt(eps) * mu * r);
    const cplx psi = x(static_cast<Eigen::Index>(j)) / r;
    acc += w[j] * std::conj(psi) * vv[j] * g * r * r;
  }
  return eps * eps / (I * pi) * 4.0 * pi * acc * lambda;
}

namespace {

cplx integrate_lambda(double band, std::size_t panels, std::size_t order, const std::function<cplx(double)>& fn,
                      std::vector<double>* nodes = nullptr, std::vector<cplx>* values = nullptr) {
  const auto rule = composite_gauss(uniform_edges(0.0, band, panels), order);
  std::vector<cplx> vals(rule.size());
  tbb::parallel_for(std::size_t{0}, rule.size(), [&](std::size_t i) { vals[i] = fn(rule.x[i]); });
  cplx s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.w[i] * vals[i];
  if (nodes) *nodes = rule.x;
  if (values) *values = std::move(vals);
  return s;
}

}  // namespace

PairingResult weps_pairing(const RadialPotential& V, double eps, const RadialInput& u, const RadialInput& v,
                           const PairingOptions& opt) {
  if (!(eps > 0.0)) throw ValidationError("weps_pairing: eps must be positive");
  if (!(u.band > 0.0) || !(u.extent > 0.0) || !(v.extent > 0.0)) throw ValidationError("weps_pairing: bad input extents");
  PairingResult out;
  out.base = radial_inner(u, v);
  auto fn = [&](double l) { return weps_integrand(V, eps, u, v, l, opt.shrink); };
  const cplx fine = integrate_lambda(u.band, opt.lambda_panels, opt.lambda_order, fn, &out.lambda, &out.integrand);
  const std::size_t coarse_order = std::max<std::size_t>(2, opt.lambda_order * 3 / 4);
  const cplx coarse = integrate_lambda(u.band, opt.lambda_panels, coarse_order, fn);
  out.value = out.base + fine;
  out.quadrature_error = std::abs(fine - coarse);
  const double scale = std::max(std::abs(out.value), std::abs(out.base));
  if (out.quadrature_error > opt.quadrature_tol * scale) {
    std::ostringstream os;
    os << "weps_pairing: lambda quadrature unresolved at eps = " << eps << " (estimated error "
       << out.quadrature_error << "); raise lambda_panels";
    throw NumericalError(os.str());
  }
  return out;
}

cplx limit_pairing(const RadialInput& u, const RadialInput& v, const PairingOptions& opt) {
  const auto ru = input_rule(u.extent, opt.input_panels);
  const auto rv = input_rule(v.extent, opt.input_panels);
  auto fn = [&](double l) {
    cplx su = 0.0, ev = 0.0;
    for (std::size_t q = 0; q < ru.size(); ++q) su += ru.w[q] * std::sin(l * ru.x[q]) * ru.x[q] * std::conj(u.f(ru.x[q]));
    for (std::size_t q = 0; q < rv.size(); ++q) ev += rv.w[q] * std::exp(I * (l * rv.x[q])) * rv.x[q] * v.f(rv.x[q]);
    return 4.0 * (2.0 * I * su) * ev;
  };
  return radial_inner(u, v) + integrate_lambda(u.band, opt.lambda_panels, opt.lambda_order, fn);
}

}  // namespace pint
