#include "pointint/norms.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <tbb/parallel_for.h>

#include "pointint/quadrature.hpp"
#include "pointint/radial.hpp"

namespace pint {

namespace {

cplx gaussian_overlap(const GaussianTerm& a, const GaussianTerm& b) {
  const cplx ba = std::conj(a.b);
  const cplx beta = ba + b.b;
  const Vec3 dc = a.centre - b.centre;
  std::array<cplx, 3> P{};
  for (std::size_t i = 0; i < 3; ++i) P[i] = (ba * a.centre[i] + b.b * b.centre[i]) / beta;
  const cplx base = std::conj(a.amp) * b.amp * std::exp(-ba * b.b / beta * dot(dc, dc)) * std::pow(pi / beta, 1.5);
  cplx factor = 1.0;
  const auto ax = static_cast<std::size_t>(std::max(a.axis, 0));
  const auto bx = static_cast<std::size_t>(std::max(b.axis, 0));
  if (a.axis >= 0 && b.axis >= 0)
    factor = (P[ax] - a.centre[ax]) * (P[bx] - b.centre[bx]) + (ax == bx ? 1.0 / (2.0 * beta) : 0.0);
  else if (a.axis >= 0)
    factor = P[ax] - a.centre[ax];
  else if (b.axis >= 0)
    factor = P[bx] - b.centre[bx];
  return base * factor;
}

Vec3 term_centre(const FieldTerm& t) {
  return std::visit([](const auto& x) { return x.centre; }, t);
}

double field_scale(const ScalarField& f) {
  double s = 0.25;
  for (const auto& t : f.terms())
    if (const auto* g = std::get_if<GaussianTerm>(&t)) s = std::min(s, 0.25 / std::sqrt(g->b.real()));
  return s;
}

double auto_panel(const CentredField& f) {
  double s = f.has_free() ? field_scale(*f.free) : 0.25;
  // anchored profiles are interpolants of smooth samples; 8-point panels of this width resolve them
  for (const auto& a : f.anchored) s = std::min(s, std::max(2.0 * a.reduced.grid.h(), 0.1));
  return s;
}

// Radial panel edges on [r_in, r_out]: geometric from r_in (or from a tiny start when r_in = 0)
// until the width reaches `panel`, then uniform.
std::vector<double> radial_edges(double r_in, double r_out, double panel, double* inner_start) {
  std::vector<double> e;
  double a = r_in > 0.0 ? r_in : panel * std::ldexp(1.0, -34);
  if (inner_start) *inner_start = a;
  e.push_back(a);
  double w = r_in > 0.0 ? std::min(panel, r_in) : a;
  while (a < r_out) {
    a = std::min(r_out, a + w);
    e.push_back(a);
    w = std::min(panel, 2.0 * w);
  }
  return e;
}

struct AngularRule {
  std::vector<Vec3> dirs;
  std::vector<double> w;  // sums to 4 pi
};

AngularRule angular_rule(int order) {
  const auto& gl = gauss_legendre(static_cast<std::size_t>(order));
  const int naz = 2 * order;
  AngularRule r;
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double ct = gl.x[i], st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int k = 0; k < naz; ++k) {
      const double ph = 2.0 * pi * (k + 0.5) / naz;
      r.dirs.push_back({st * std::cos(ph), st * std::sin(ph), ct});
      r.w.push_back(2.0 * pi * gl.w[i] / naz);
    }
  }
  return r;
}

template <class T, class Fn>
T sphere_integral_fixed(const Fn& fn, const Vec3& c, const std::vector<double>& edges, std::size_t order,
                        const AngularRule& ang) {
  const auto& gl = gauss_legendre(order);
  const std::size_t np = edges.size() - 1;
  std::vector<T> part(np, T{});
  tbb::parallel_for(std::size_t{0}, np, [&](std::size_t p) {
    const double a = edges[p], b = edges[p + 1];
    T acc{};
    for (std::size_t q = 0; q < gl.size(); ++q) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[q];
      T s{};
      for (std::size_t d = 0; d < ang.dirs.size(); ++d) s += ang.w[d] * fn(c + r * ang.dirs[d]);
      acc += 0.5 * (b - a) * gl.w[q] * r * r * s;
    }
    part[p] = acc;
  });
  T total{};
  for (const auto& v : part) total += v;
  return total;
}

// Angular order doubled until the integral settles.
template <class T, class Fn>
T sphere_integral_adaptive(const Fn& fn, const Vec3& c, const std::vector<double>& edges, const LpOptions& opt) {
  int q = std::max(opt.angular_order, 4);
  T prev = sphere_integral_fixed<T>(fn, c, edges, opt.panel_order, angular_rule(q));
  while (q < 128) {
    q *= 2;
    T next = sphere_integral_fixed<T>(fn, c, edges, opt.panel_order, angular_rule(q));
    if (std::abs(next - prev) <= opt.angular_tol * std::max(std::abs(next), 1e-300)) return next;
    prev = next;
  }
  return prev;
}

// 4 pi int_{r_in}^{r_out} rho^2 F(rho) d rho for a radial integrand.
double radial_integral(const std::function<double(double)>& F, double r_in, double r_out, double panel,
                       std::size_t order, double origin_power) {
  double start = 0.0;
  const auto edges = radial_edges(r_in, r_out, panel, &start);
  const auto& gl = gauss_legendre(order);
  double acc = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], b = edges[p + 1];
    for (std::size_t q = 0; q < gl.size(); ++q) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * gl.x[q];
      acc += 0.5 * (b - a) * gl.w[q] * r * r * F(r);
    }
  }
  if (r_in == 0.0 && std::isfinite(origin_power)) {
    // rho^2 F ~ A rho^k below the first panel
    const double r = start;
    acc += r * r * F(r) * r / (origin_power + 1.0);
  }
  return 4.0 * pi * acc;
}

cplx free_inner(const ScalarField& a, const ScalarField& b) {
  cplx acc = 0.0;
  ScalarField ra, rb;
  // Gaussian-Gaussian pairs in closed form; the rest by quadrature.
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      const auto* ga = std::get_if<GaussianTerm>(&ta);
      const auto* gb = std::get_if<GaussianTerm>(&tb);
      if (ga && gb) acc += gaussian_overlap(*ga, *gb);
    }
  }
  for (const auto& t : a.terms())
    if (!std::holds_alternative<GaussianTerm>(t)) ra += ScalarField(t, a.decay());
  for (const auto& t : b.terms())
    if (!std::holds_alternative<GaussianTerm>(t)) rb += ScalarField(t, b.decay());
  auto quad = [&](const ScalarField& x, const ScalarField& y) -> cplx {
    if (x.empty() || y.empty()) return 0.0;
    const Vec3 c = term_centre(x.terms()[0]);
    const double R = std::min(x.extent_about(c), y.extent_about(c));
    if (R <= 0.0) return 0.0;
    if (x.radial_centre()) {
      // 4 pi int r^2 conj(x(r)) M_y(r) dr; the integrand is even in r, so the midpoint rule is spectral.
      const double h = std::min(0.01, 0.5 * std::min(field_scale(x), field_scale(y)));
      const auto grid = build_grid(R, static_cast<std::size_t>(std::ceil(R / h)));
      const auto m = spherical_mean(y, c, grid);
      cplx s = 0.0;
      for (std::size_t i = 0; i < grid.n; ++i) {
        const double r = grid.node(i);
        s += r * r * std::conj(x(c + Vec3{0.0, 0.0, r})) * m.values[i];
      }
      return 4.0 * pi * grid.h() * s;
    }
    LpOptions opt;
    const auto edges = radial_edges(0.0, R, std::min(field_scale(x), field_scale(y)), nullptr);
    return sphere_integral_adaptive<cplx>([&](const Vec3& p) { return std::conj(x(p)) * y(p); }, c, edges, opt);
  };
  ScalarField gb_only, ga_only;
  for (const auto& t : b.terms())
    if (std::holds_alternative<GaussianTerm>(t)) gb_only += ScalarField(t);
  for (const auto& t : a.terms())
    if (std::holds_alternative<GaussianTerm>(t)) ga_only += ScalarField(t);
  acc += quad(ra, rb);
  acc += quad(ra, gb_only);
  acc += std::conj(quad(rb, ga_only));
  return acc;
}

bool same_grid(const RadialGrid& a, const RadialGrid& b) { return a.n == b.n && a.r_max == b.r_max; }

cplx anchored_same_centre(const RadialProfile& a, const RadialProfile& b) {
  const bool a_fine = a.grid.h() <= b.grid.h();
  const RadialGrid& g = a_fine ? a.grid : b.grid;
  std::vector<cplx> f(g.n);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double r = g.node(i);
    const cplx va = same_grid(a.grid, g) ? a.values[i] : a.at(r);
    const cplx vb = same_grid(b.grid, g) ? b.values[i] : b.at(r);
    f[i] = std::conj(va) * vb;
  }
  return 4.0 * pi * halfline_sum(f, g.h());
}

cplx anchored_two_centre(const RadialProfile& a, const RadialProfile& b, double d) {
  // 4 pi int conj(w_a(rho)) (rho M_b)(rho) d rho, split at the kink rho = d
  const RunningIntegral W(b);
  const double end = a.grid.r_max;
  const double h = std::min(a.grid.h(), b.grid.h());
  const auto& gl = gauss_legendre(6);
  auto piece = [&](double lo, double hi) {
    cplx acc = 0.0;
    if (hi <= lo) return acc;
    const auto np = static_cast<std::size_t>(std::ceil((hi - lo) / h));
    const double w = (hi - lo) / static_cast<double>(np);
    for (std::size_t p = 0; p < np; ++p) {
      const double x0 = lo + static_cast<double>(p) * w;
      for (std::size_t q = 0; q < gl.size(); ++q) {
        const double r = x0 + 0.5 * w * (1.0 + gl.x[q]);
        acc += 0.5 * w * gl.w[q] * std::conj(a.at(r)) * two_centre_reduced_mean(W, d, r);
      }
    }
    return acc;
  };
  return 4.0 * pi * (piece(0.0, std::min(d, end)) + piece(std::min(d, end), end));
}

cplx free_anchored(const ScalarField& f, const Vec3& c, const RadialProfile& w) {
  const auto g = reduced_mean(f, c, w.grid);
  std::vector<cplx> prod(w.grid.n);
  for (std::size_t i = 0; i < w.grid.n; ++i) prod[i] = std::conj(g.values[i]) * w.values[i];
  return 4.0 * pi * halfline_sum(prod, w.grid.h());
}

}  // namespace

cplx inner_product(const ScalarField& a, const ScalarField& b) { return free_inner(a, b); }

cplx inner_product(const CentredField& a, const CentredField& b) {
  cplx acc = 0.0;
  if (a.has_free() && b.has_free()) acc += free_inner(*a.free, *b.free);
  if (a.has_free())
    for (const auto& pb : b.anchored) acc += free_anchored(*a.free, b.centres.at(pb.centre), pb.reduced);
  if (b.has_free())
    for (const auto& pa : a.anchored)
      acc += std::conj(free_anchored(*b.free, a.centres.at(pa.centre), pa.reduced));
  for (const auto& pa : a.anchored) {
    for (const auto& pb : b.anchored) {
      const double d = distance(a.centres.at(pa.centre), b.centres.at(pb.centre));
      acc += d == 0.0 ? anchored_same_centre(pa.reduced, pb.reduced) : anchored_two_centre(pa.reduced, pb.reduced, d);
    }
  }
  return acc;
}

double l2_norm(const ScalarField& f) { return std::sqrt(std::max(0.0, inner_product(f, f).real())); }
double l2_norm(const CentredField& f) { return std::sqrt(std::max(0.0, inner_product(f, f).real())); }

double sphere_integral(const std::function<double(const Vec3&)>& fn, const Vec3& c, double r_in, double r_out,
                       double panel, const LpOptions& opt) {
  const auto edges = radial_edges(r_in, r_out, panel, nullptr);
  return sphere_integral_adaptive<double>(fn, c, edges, opt);
}

namespace {

std::vector<std::size_t> anchor_centres(const CentredField& f) {
  std::vector<std::size_t> c;
  for (const auto& a : f.anchored)
    if (std::find(c.begin(), c.end(), a.centre) == c.end()) c.push_back(a.centre);
  // pieces anchored at coinciding points count once
  std::vector<std::size_t> out;
  for (auto j : c) {
    bool dup = false;
    for (auto k : out) dup = dup || distance(f.centres[j], f.centres[k]) == 0.0;
    if (!dup) out.push_back(j);
  }
  return out;
}

double radial_lp(const CentredField& f, const Vec3& c, double p, double r_in, double r_out, double panel,
                 std::size_t order) {
  const Vec3 axis{0.0, 0.0, 1.0};
  auto F = [&](double r) { return std::pow(std::abs(f(c + r * axis)), p); };
  return radial_integral(F, r_in, r_out, panel, order, 2.0 - p);
}

}  // namespace

double lp_norm(const ScalarField& f, double p, const LpOptions& opt) {
  if (!(p >= 1.0)) throw ValidationError("lp_norm: p must be >= 1");
  if (f.empty()) return 0.0;
  if (p == 2.0) return l2_norm(f);
  const double panel = opt.panel > 0.0 ? opt.panel : field_scale(f);
  if (auto c = f.radial_centre()) {
    const double R = f.extent_about(*c);
    auto F = [&](double r) { return std::pow(std::abs(f(*c + Vec3{0.0, 0.0, r})), p); };
    return std::pow(radial_integral(F, 0.0, R, panel, opt.panel_order, 2.0), 1.0 / p);
  }
  const Vec3 c = term_centre(f.terms()[0]);
  const double R = f.extent_about(c);
  return std::pow(sphere_integral([&](const Vec3& x) { return std::pow(std::abs(f(x)), p); }, c, 0.0, R, panel, opt),
                  1.0 / p);
}

double lp_norm(const CentredField& f, double p, const LpOptions& opt) {
  if (!(p >= 1.0)) throw ValidationError("lp_norm: p must be >= 1");
  if (p == 2.0) return l2_norm(f);
  const auto anchors = anchor_centres(f);
  if (anchors.empty()) return f.has_free() ? lp_norm(*f.free, p, opt) : 0.0;
  if (p >= 3.0) {
    // |f| ~ |w(0)| / rho near a centre: rho^{2-p} is not integrable at the origin
    for (auto j : anchors) {
      cplx w0 = 0.0;
      double scale = 0.0;
      for (const auto& a : f.anchored) {
        if (a.reduced.parity == Parity::odd || distance(f.centres[a.centre], f.centres[j]) != 0.0) continue;
        w0 += a.reduced.value_at_origin();
        for (const auto& v : a.reduced.values) scale = std::max(scale, std::abs(v));
      }
      if (std::abs(w0) > 1e-12 * scale) {
        std::ostringstream os;
        os << "lp_norm: non-integrable singularity at centre " << j << ": |f|^p ~ |w(0)|^p rho^{-p}, local exponent "
           << 2.0 - p << " <= -1";
        throw NumericalError(os.str());
      }
    }
  }
  const double panel = opt.panel > 0.0 ? opt.panel : auto_panel(f);
  if (anchors.size() == 1) {
    const Vec3 c = f.centres[anchors[0]];
    const double R = f.extent_about(c);
    const auto rc = f.has_free() ? f.free->radial_centre() : std::optional<Vec3>(c);
    if (rc && distance(*rc, c) == 0.0) return std::pow(radial_lp(f, c, p, 0.0, R, panel, opt.panel_order), 1.0 / p);
    // 3-D cubature only where the free part is felt; radial beyond it
    const double Rf = std::min(R, f.free->extent_about(c));
    const double inner_panel = opt.panel > 0.0 ? opt.panel : field_scale(*f.free);
    auto fn = [&](const Vec3& x) { return std::pow(std::abs(f(x)), p); };
    double total = sphere_integral(fn, c, 0.0, Rf, inner_panel, opt);
    if (Rf < R) total += radial_lp(f, c, p, Rf, R, panel, opt.panel_order);
    return std::pow(total, 1.0 / p);
  }
  double total = 0.0;
  for (auto j : anchors) {
    const Vec3 c = f.centres[j];
    auto fn = [&](const Vec3& x) {
      const double dj = distance(x, c);
      double s = 1.0;
      for (auto k : anchors) {
        if (k == j) continue;
        const double ratio = dj / distance(x, f.centres[k]);
        s += ratio * ratio * ratio * ratio;
      }
      return std::pow(std::abs(f(x)), p) / s;
    };
    total += sphere_integral(fn, c, 0.0, f.extent_about(c), panel, opt);
  }
  return std::pow(total, 1.0 / p);
}

double lp_norm_shell(const CentredField& f, double p, const Vec3& c, double r_in, double r_out,
                     const LpOptions& opt) {
  if (!(p >= 1.0)) throw ValidationError("lp_norm_shell: p must be >= 1");
  if (!(r_in >= 0.0) || !(r_out > r_in)) throw ValidationError("lp_norm_shell: need 0 <= r_in < r_out");
  for (const auto& a : f.anchored) {
    const double d = distance(f.centres.at(a.centre), c);
    if (d > 0.0 && d < r_out) throw ValidationError("lp_norm_shell: another anchor centre inside the shell");
  }
  const double panel = opt.panel > 0.0 ? opt.panel : auto_panel(f);
  bool radial = true;
  for (const auto& a : f.anchored) radial = radial && distance(f.centres.at(a.centre), c) == 0.0;
  if (f.has_free()) {
    const auto rc = f.free->radial_centre();
    radial = radial && rc && distance(*rc, c) == 0.0;
  }
  if (radial) return std::pow(radial_lp(f, c, p, r_in, r_out, panel, opt.panel_order), 1.0 / p);
  auto fn = [&](const Vec3& x) { return std::pow(std::abs(f(x)), p); };
  return std::pow(sphere_integral(fn, c, r_in, r_out, panel, opt), 1.0 / p);
}

}  // namespace pint
