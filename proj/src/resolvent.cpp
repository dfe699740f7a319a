#include "pointint/resolvent.hpp"

#include <algorithm>
#include <sstream>

#include <tbb/parallel_for.h>

#include "pointint/norms.hpp"
#include "pointint/quadrature.hpp"
#include "pointint/radial.hpp"

namespace pint {

namespace {

void require_upper(cplx z) {
  if (z.imag() < 0.0) throw ValidationError("resolvent: sqrt(z) must lie in the closed upper half plane");
}

}  // namespace

cplx free_resolvent_at(const ScalarField& u, cplx z, const Vec3& x, const ResolventOptions& opt) {
  require_upper(z);
  double R = u.extent_about(x);
  if (z.imag() > 0.0) R = std::min(R, std::max(1.0, -std::log(opt.tail_tol) / z.imag()));
  if (R <= 0.0) return 0.0;
  const auto n = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(R / opt.h)));
  const auto grid = build_grid(R, n);
  const auto m = spherical_mean(u, x, grid);
  std::vector<cplx> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid.node(i);
    f[i] = r * std::exp(I * z * r) * m.values[i];
  }
  return halfline_sum(f, grid.h());
}

std::vector<cplx> free_resolvent_apply(const ScalarField& u, cplx z, std::span<const Vec3> where,
                                       const ResolventOptions& opt) {
  require_upper(z);
  std::vector<cplx> out(where.size());
  tbb::parallel_for(std::size_t{0}, where.size(), [&](std::size_t i) { out[i] = free_resolvent_at(u, z, where[i], opt); });
  return out;
}

void check_off_poles(const GammaMatrix& g) {
  Eigen::PartialPivLU<CMatrix> lu(g.entries);
  const cplx det = lu.determinant();
  double scale = 1.0;
  for (double s : g.row_scale) scale *= s;
  if (std::abs(det) < 1e-10 * scale) {
    std::ostringstream os;
    os.precision(6);
    os << "Gamma(z) singular at z = " << g.z << ": |det| = " << std::abs(det) << ", condition ~ "
       << (lu.rcond() > 0.0 ? 1.0 / lu.rcond() : std::numeric_limits<double>::infinity());
    throw NumericalError(os.str());
  }
}

namespace {

RadialProfile green_reduced(cplx z, cplx q, const RadialGrid& grid) {
  RadialProfile p(grid, Parity::none);
  for (std::size_t i = 0; i < grid.n; ++i) p.values[i] = q * std::exp(I * z * grid.node(i)) / (4.0 * pi);
  return p;
}

}  // namespace

ResolventResult resolvent_apply(const Configuration& cfg, cplx z, const ScalarField& u, const ResolventOptions& opt) {
  validate(cfg);
  require_upper(z);
  const auto gm = gamma_build(cfg, z);
  check_off_poles(gm);
  const std::size_t n = cfg.size();
  CVector b(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) b(static_cast<Eigen::Index>(k)) = free_resolvent_at(u, z, cfg.centres[k], opt);
  ResolventResult res;
  res.charges = gm.entries.partialPivLu().solve(b);
  const Vec3 c = u.empty() ? Vec3{} : std::visit([](const auto& t) { return t.centre; }, u.terms()[0]);
  const double extent = u.extent_about(c) + (z.imag() > 0.0 ? -std::log(opt.tail_tol) / z.imag() : 1e3);
  auto free = ScalarField::generic([u, z, opt](const Vec3& x) { return free_resolvent_at(u, z, x, opt); }, c,
                                   extent, DecayTag{DecayClass::schwartz, 0.0});
  res.field = CentredField::from(free, cfg.centres);
  for (std::size_t j = 0; j < n; ++j)
    res.field.anchored.push_back({j, green_reduced(z, res.charges(static_cast<Eigen::Index>(j)), opt.anchor_grid)});
  return res;
}

DomainElement domain_element_build(const Configuration& cfg, cplx z, const ScalarField& phi, const RadialGrid& grid) {
  validate(cfg);
  require_upper(z);
  const auto gm = gamma_build(cfg, z);
  check_off_poles(gm);
  const std::size_t n = cfg.size();
  CVector vals(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) vals(static_cast<Eigen::Index>(k)) = phi.empty() ? cplx(0.0) : phi(cfg.centres[k]);
  DomainElement d{z, phi, gm.entries.partialPivLu().solve(vals), CentredField::from(phi, cfg.centres)};
  for (std::size_t j = 0; j < n; ++j)
    d.psi.anchored.push_back({j, green_reduced(z, d.charges(static_cast<Eigen::Index>(j)), grid)});
  return d;
}

double bethe_peierls_residual(const CentredField& psi, const Configuration& cfg, std::size_t j,
                              std::pair<double, double> window, double floor) {
  validate(cfg);
  if (j >= cfg.size()) throw ValidationError("bethe_peierls_residual: centre index out of range");
  const auto [lo, hi] = window;
  if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("bethe_peierls_residual: bad window");
  for (std::size_t k = 0; k < cfg.size(); ++k)
    if (k != j && cfg.dist(j, k) <= hi) throw ValidationError("bethe_peierls_residual: window contains another centre");
  const Vec3 c = cfg.centres[j];
  // Spherical mean: pieces anchored at c are radial already, the rest by angular quadrature.
  CentredField rest(psi.centres);
  rest.free = psi.free;
  std::vector<const AnchoredPiece*> here;
  for (const auto& a : psi.anchored) {
    if (distance(psi.centres.at(a.centre), c) == 0.0)
      here.push_back(&a);
    else
      rest.anchored.push_back(a);
  }
  const auto& gl = gauss_legendre(16);
  const std::size_t m = 12;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(m), 2);
  CVector y(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const double r = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(m - 1));
    cplx mean = 0.0;
    for (const auto* a : here) mean += anchored_value(a->reduced, r);
    cplx q = 0.0;
    for (std::size_t p = 0; p < gl.size(); ++p) {
      const double ct = gl.x[p], st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int k = 0; k < 32; ++k) {
        const double ph = 2.0 * pi * (k + 0.5) / 32.0;
        q += 0.5 * gl.w[p] / 32.0 * rest(c + r * Vec3{st * std::cos(ph), st * std::sin(ph), ct});
      }
    }
    mean += q;
    A(static_cast<Eigen::Index>(i), 0) = 1.0 / r;
    A(static_cast<Eigen::Index>(i), 1) = 1.0;
    y(static_cast<Eigen::Index>(i)) = mean;
  }
  const CMatrix Ac = A.cast<cplx>();
  const CVector sol = Ac.colPivHouseholderQr().solve(y);
  const cplx q = 4.0 * pi * sol(0);
  return std::abs(sol(1) - cfg.alphas[j] * q) / std::max(std::abs(q), floor);
}

namespace {

// Reduced spherical mean r M(r) at the given radii by product Gauss-Legendre x uniform quadrature.
std::vector<cplx> oracle_reduced_mean(const ScalarField& u, const Vec3& c, std::span<const double> radii,
                                      std::size_t order) {
  const auto& gl = gauss_legendre(order);
  const std::size_t naz = 2 * order;
  std::vector<cplx> out(radii.size());
  tbb::parallel_for(std::size_t{0}, radii.size(), [&](std::size_t i) {
    const double r = radii[i];
    cplx acc = 0.0;
    for (std::size_t p = 0; p < gl.size(); ++p) {
      const double ct = gl.x[p], st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (std::size_t k = 0; k < naz; ++k) {
        const double ph = 2.0 * pi * (static_cast<double>(k) + 0.5) / static_cast<double>(naz);
        acc += 0.5 * gl.w[p] / static_cast<double>(naz) * u(c + r * Vec3{st * std::cos(ph), st * std::sin(ph), ct});
      }
    }
    out[i] = r * acc;
  });
  return out;
}

// Value at eps = 0 of the interpolant in the first count functions of
// {1, eps, eps log eps, eps^1.5, eps^2, eps^2 log eps}. The log terms come from the
// zero-energy resonance, where Gamma(k)^{-1} ~ 1/k.
cplx extrapolate_to_zero(std::span<const double> eps, std::span<const cplx> y) {
  const auto m = static_cast<Eigen::Index>(eps.size());
  CMatrix A(m, m);
  CVector b(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double e = eps[static_cast<std::size_t>(i)], l = std::log(e);
    const double basis[] = {1.0, e, e * l, e * std::sqrt(e), e * e, e * e * l};
    for (Eigen::Index c = 0; c < m; ++c) A(i, c) = basis[c];
    b(i) = y[static_cast<std::size_t>(i)];
  }
  return A.colPivHouseholderQr().solve(b)(0);
}

}  // namespace

AbelResult abel_pairing_oracle(const Configuration& cfg, const ScalarField& u, const ScalarField& v,
                               std::span<const double> eps_schedule, const AbelOptions& opt) {
  validate(cfg);
  if (eps_schedule.size() < 2 || eps_schedule.size() > 6)
    throw ValidationError("abel_pairing_oracle: the eps schedule needs 2 to 6 values");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i)
    if (!(eps_schedule[i] > 0.0) || (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1])))
      throw ValidationError("abel_pairing_oracle: eps schedule must be positive and decreasing");
  const std::size_t n = cfg.size();

  // r quadrature: composite Gauss-Legendre over [0, R_j] for each centre
  std::vector<std::vector<double>> rr(n), rw(n);
  std::vector<std::vector<cplx>> gu(n), gv(n);
  double smallest_width = 1.0;
  for (const auto& t : u.terms())
    if (const auto* g = std::get_if<GaussianTerm>(&t)) smallest_width = std::min(smallest_width, 1.0 / std::sqrt(g->b.real()));
  for (const auto& t : v.terms())
    if (const auto* g = std::get_if<GaussianTerm>(&t)) smallest_width = std::min(smallest_width, 1.0 / std::sqrt(g->b.real()));
  for (std::size_t j = 0; j < n; ++j) {
    const double R = std::max(u.extent_about(cfg.centres[j]), v.extent_about(cfg.centres[j]));
    const auto np = static_cast<std::size_t>(std::ceil(R / (0.25 * smallest_width)));
    std::vector<double> edges(np + 1);
    for (std::size_t p = 0; p <= np; ++p) edges[p] = R * static_cast<double>(p) / static_cast<double>(np);
    auto rule = composite_gauss(edges, 12);
    rr[j] = rule.x;
    rw[j] = rule.w;
    gu[j] = oracle_reduced_mean(u, cfg.centres[j], rr[j], opt.angular_order);
    gv[j] = oracle_reduced_mean(v, cfg.centres[j], rr[j], opt.angular_order);
  }

  // largest useful real wavenumber: the transforms of r M decay like a Gaussian in k
  double t_pos = opt.t_positive_max;
  if (t_pos <= 0.0) t_pos = 40.0 / smallest_width;

  // Bound states put a pole of width eps (in lambda) at t = -lambda0; Gershgorin bounds lambda0.
  double amin = 0.0;
  for (double a : cfg.alphas) amin = std::min(amin, a);
  const double lambda_bound = 2.0 * (-4.0 * pi * amin + (n > 1 ? static_cast<double>(n - 1) / cfg.min_distance() : 0.0)) + 1.0;
  std::vector<double> poles;
  for (const auto& b : find_bound_states(cfg, lambda_bound)) poles.push_back(b.lambda0);

  const cplx free_part = inner_product(u, v);
  AbelResult res;
  for (double eps : eps_schedule) {
    // lambda = t |t|; panels graded geometrically toward t = 0 on the scale sqrt(eps)
    std::vector<double> edges;
    const double t0 = 1e-3 * std::sqrt(eps);
    for (double t = opt.t_negative_max; t > 1.0; t *= 0.8) edges.push_back(-t);
    for (double t = 1.0; t > t0; t *= 0.7) edges.push_back(-t);
    edges.push_back(0.0);
    for (double t = t0; t < 1.0; t /= 0.7) edges.push_back(t);
    for (double t = 1.0; t < t_pos; t += 0.05 * smallest_width) edges.push_back(t);
    edges.push_back(t_pos);
    for (double l0 : poles) {
      edges.push_back(-l0);
      for (double d = 0.01 * eps / (2.0 * l0); d < 0.5 * l0; d *= 1.5) {
        edges.push_back(-l0 - d);
        edges.push_back(-l0 + d);
      }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    const auto rule = composite_gauss(edges, opt.t_order);
    std::vector<cplx> part(rule.size());
    tbb::parallel_for(std::size_t{0}, rule.size(), [&](std::size_t q) {
      const double t = rule.x[q];
      const double lambda = t * std::abs(t);
      const cplx k = std::sqrt(cplx(lambda, eps));
      CVector a(static_cast<Eigen::Index>(n)), b(static_cast<Eigen::Index>(n));
      for (std::size_t j = 0; j < n; ++j) {
        cplx aj = 0.0, bj = 0.0;
        for (std::size_t i = 0; i < rr[j].size(); ++i) {
          const double r = rr[j][i];
          const cplx e1 = std::exp(I * k * r);
          aj += rw[j][i] * (e1 - std::exp(-I * std::conj(k) * r)) * std::conj(gu[j][i]);
          bj += rw[j][i] * e1 * gv[j][i];
        }
        a(static_cast<Eigen::Index>(j)) = aj;
        b(static_cast<Eigen::Index>(j)) = bj;
      }
      const auto gm = gamma_build(cfg, k);
      const CVector x = gm.entries.partialPivLu().solve(b);
      part[q] = rule.w[q] * 2.0 * std::abs(t) * a.transpose() * x;
    });
    cplx acc = 0.0;
    for (const auto& p : part) acc += p;
    res.eps.push_back(eps);
    res.sequence.push_back(free_part + acc / (2.0 * pi * I));
  }
  const std::size_t m = res.sequence.size();
  res.value = extrapolate_to_zero(res.eps, res.sequence);
  const cplx prev = extrapolate_to_zero(std::span(res.eps).subspan(1), std::span(res.sequence).subspan(1));
  res.extrapolation_change = std::abs(res.value - prev) / std::max(std::abs(res.value), 1e-300);
  if (res.extrapolation_change > opt.accept) {
    std::ostringstream os;
    os.precision(10);
    os << "abel_pairing_oracle: extrapolation not converged (change " << res.extrapolation_change << "); sequence:";
    for (std::size_t i = 0; i < m; ++i) os << " eps=" << res.eps[i] << " -> " << res.sequence[i];
    throw NumericalError(os.str());
  }
  return res;
}

}  // namespace pint
