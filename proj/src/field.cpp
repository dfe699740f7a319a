#include "pointint/field.hpp"

#include <algorithm>

namespace pint {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

int decay_rank(DecayClass k) {
  switch (k) {
    case DecayClass::compact: return 0;
    case DecayClass::schwartz: return 1;
    case DecayClass::polynomial: return 2;
  }
  return 2;
}

DecayTag weaker(const DecayTag& a, const DecayTag& b) {
  if (decay_rank(a.kind) != decay_rank(b.kind)) return decay_rank(a.kind) > decay_rank(b.kind) ? a : b;
  if (a.kind == DecayClass::polynomial) return a.rate < b.rate ? a : b;
  if (a.kind == DecayClass::compact) return a.rate > b.rate ? a : b;
  return a;
}

}  // namespace

cplx eval_term(const FieldTerm& t, const Vec3& x) {
  return std::visit(Overloaded{
                        [&](const GaussianTerm& g) {
                          const Vec3 d = x - g.centre;
                          cplx v = g.amp * std::exp(-g.b * dot(d, d));
                          if (g.axis >= 0) v *= d[static_cast<std::size_t>(g.axis)];
                          return v;
                        },
                        [&](const RadialTerm& r) {
                          const cplx v = r.amp * (*r.profile)(distance(x, r.centre));
                          return r.conjugate ? std::conj(v) : v;
                        },
                        [&](const GenericTerm& g) {
                          const cplx v = g.amp * (*g.fn)(x - g.shift);
                          return g.conjugate ? std::conj(v) : v;
                        },
                    },
                    t);
}

ScalarField::ScalarField(FieldTerm t, DecayTag tag) : decay_(tag) { terms_.push_back(std::move(t)); }

ScalarField ScalarField::gaussian(cplx amp, double a, const Vec3& c) {
  if (!(a > 0.0)) throw ValidationError("gaussian width parameter must be positive");
  return ScalarField(GaussianTerm{amp, a, c, -1});
}

ScalarField ScalarField::dipole_gaussian(cplx amp, double a, const Vec3& c, int axis) {
  if (!(a > 0.0) || axis < 0 || axis > 2) throw ValidationError("bad dipole gaussian");
  return ScalarField(GaussianTerm{amp, a, c, axis});
}

ScalarField ScalarField::radial(const Vec3& c, std::function<cplx(double)> profile, double extent, DecayTag tag) {
  RadialTerm t;
  t.centre = c;
  t.profile = std::make_shared<const std::function<cplx(double)>>(std::move(profile));
  t.extent = extent;
  return ScalarField(std::move(t), tag);
}

ScalarField ScalarField::generic(std::function<cplx(const Vec3&)> fn, const Vec3& centre, double extent,
                                 DecayTag tag) {
  GenericTerm t;
  t.fn = std::make_shared<const std::function<cplx(const Vec3&)>>(std::move(fn));
  t.centre = centre;
  t.extent = extent;
  return ScalarField(std::move(t), tag);
}

cplx ScalarField::operator()(const Vec3& x) const {
  cplx acc = 0.0;
  for (const auto& t : terms_) acc += eval_term(t, x);
  return acc;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  decay_ = terms_.empty() ? o.decay_ : (o.terms_.empty() ? decay_ : weaker(decay_, o.decay_));
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

ScalarField ScalarField::scaled(cplx s) const {
  ScalarField out = *this;
  for (auto& t : out.terms_) {
    std::visit(Overloaded{
                   [&](GaussianTerm& g) { g.amp *= s; },
                   [&](RadialTerm& r) { r.amp *= r.conjugate ? std::conj(s) : s; },
                   [&](GenericTerm& g) { g.amp *= g.conjugate ? std::conj(s) : s; },
               },
               t);
  }
  return out;
}

ScalarField ScalarField::conjugated() const {
  ScalarField out = *this;
  for (auto& t : out.terms_) {
    std::visit(Overloaded{
                   [](GaussianTerm& g) {
                     g.amp = std::conj(g.amp);
                     g.b = std::conj(g.b);
                   },
                   [](RadialTerm& r) { r.conjugate = !r.conjugate; },
                   [](GenericTerm& g) { g.conjugate = !g.conjugate; },
               },
               t);
  }
  return out;
}

ScalarField ScalarField::translated(const Vec3& v) const {
  ScalarField out = *this;
  for (auto& t : out.terms_) {
    std::visit(Overloaded{
                   [&](GaussianTerm& g) { g.centre = g.centre + v; },
                   [&](RadialTerm& r) { r.centre = r.centre + v; },
                   [&](GenericTerm& g) {
                     g.centre = g.centre + v;
                     g.shift = g.shift + v;
                   },
               },
               t);
  }
  return out;
}

double ScalarField::extent_about(const Vec3& p, double tol) const {
  double r = 0.0;
  for (const auto& t : terms_) {
    r = std::max(r, std::visit(Overloaded{
                                   [&](const GaussianTerm& g) {
                                     const double re_b = g.b.real();
                                     const double amp = std::max(std::abs(g.amp), tol);
                                     // |amp| s^k e^{-Re b s^2} < tol, k <= 1; a couple of widths of slack
                                     double s = std::sqrt(std::max(0.0, std::log(amp / tol)) / re_b);
                                     s += 2.0 / std::sqrt(re_b);
                                     return distance(p, g.centre) + s;
                                   },
                                   [&](const RadialTerm& t2) { return distance(p, t2.centre) + t2.extent; },
                                   [&](const GenericTerm& g) { return distance(p, g.centre) + g.extent; },
                               },
                               t));
  }
  return r;
}

std::optional<Vec3> ScalarField::radial_centre() const {
  std::optional<Vec3> c;
  for (const auto& t : terms_) {
    std::optional<Vec3> tc;
    if (const auto* g = std::get_if<GaussianTerm>(&t); g && g->axis < 0) tc = g->centre;
    if (const auto* r = std::get_if<RadialTerm>(&t)) tc = r->centre;
    if (!tc) return std::nullopt;
    if (c && distance(*c, *tc) > 0.0) return std::nullopt;
    c = tc;
  }
  return c;
}

bool ScalarField::all_gaussian() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const FieldTerm& t) { return std::holds_alternative<GaussianTerm>(t); });
}

cplx anchored_value(const RadialProfile& reduced, double rho) {
  if (rho > 0.0) return reduced.at(rho) / rho;
  const double h = reduced.grid.h();
  return extrapolate_to_origin(reduced.values[0] / (0.5 * h), reduced.values[1] / (1.5 * h),
                               reduced.values[2] / (2.5 * h));
}

CentredField CentredField::from(const ScalarField& u, std::vector<Vec3> centres) {
  CentredField f(std::move(centres));
  f.free = u;
  return f;
}

cplx CentredField::anchored_value(const Vec3& x) const {
  cplx acc = 0.0;
  for (const auto& a : anchored) acc += pint::anchored_value(a.reduced, distance(x, centres.at(a.centre)));
  return acc;
}

cplx CentredField::operator()(const Vec3& x) const {
  cplx acc = anchored_value(x);
  if (free) acc += (*free)(x);
  return acc;
}

CentredField& CentredField::operator+=(const CentredField& o) {
  if (centres.empty()) centres = o.centres;
  if (!o.anchored.empty() && o.centres != centres)
    throw ValidationError("adding centred fields with different centre sets");
  if (o.free) {
    if (free)
      *free += *o.free;
    else
      free = o.free;
  }
  anchored.insert(anchored.end(), o.anchored.begin(), o.anchored.end());
  return *this;
}

CentredField CentredField::scaled(cplx s) const {
  CentredField out = *this;
  if (out.free) out.free = out.free->scaled(s);
  for (auto& a : out.anchored)
    for (auto& v : a.reduced.values) v *= s;
  return out;
}

CentredField CentredField::conjugated() const {
  CentredField out = *this;
  if (out.free) out.free = out.free->conjugated();
  for (auto& a : out.anchored)
    for (auto& v : a.reduced.values) v = std::conj(v);
  return out;
}

CentredField CentredField::translated(const Vec3& v) const {
  CentredField out = *this;
  for (auto& c : out.centres) c = c + v;
  if (out.free) out.free = out.free->translated(v);
  return out;
}

double CentredField::extent_about(const Vec3& p, double tol) const {
  double r = has_free() ? free->extent_about(p, tol) : 0.0;
  for (const auto& a : anchored) r = std::max(r, distance(p, centres.at(a.centre)) + a.reduced.grid.r_max);
  return r;
}

}  // namespace pint
