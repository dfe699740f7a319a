#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "pointint/core.hpp"

namespace pint {

enum class DecayClass { schwartz, compact, polynomial };

struct DecayTag {
  DecayClass kind = DecayClass::schwartz;
  double rate = 0.0;  // polynomial exponent, or support radius for compact
};

// amp * (x - c)_axis * exp(-b |x - c|^2); axis < 0 drops the linear factor. Re b > 0.
struct GaussianTerm {
  cplx amp = 1.0;
  cplx b = 1.0;
  Vec3 centre{};
  int axis = -1;
};

// profile(|x - c|); negligible beyond `extent`.
struct RadialTerm {
  Vec3 centre{};
  std::shared_ptr<const std::function<cplx(double)>> profile;
  double extent = 0.0;
  cplx amp = 1.0;
  bool conjugate = false;
};

// Anything else; negligible farther than `extent` from `centre`.
struct GenericTerm {
  std::shared_ptr<const std::function<cplx(const Vec3&)>> fn;
  Vec3 centre{};
  double extent = 0.0;
  cplx amp = 1.0;
  bool conjugate = false;
  Vec3 shift{};  // evaluates fn(x - shift)
};

using FieldTerm = std::variant<GaussianTerm, RadialTerm, GenericTerm>;

// An evaluable complex field on R^3, kept as a sum of terms so closed forms
// (Gaussian means, overlaps, free evolution) stay available downstream.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(FieldTerm t, DecayTag tag = {});

  static ScalarField gaussian(cplx amp, double a, const Vec3& c);
  // amp * (x - c)_axis * exp(-a |x - c|^2)
  static ScalarField dipole_gaussian(cplx amp, double a, const Vec3& c, int axis);
  static ScalarField radial(const Vec3& c, std::function<cplx(double)> profile, double extent, DecayTag tag = {});
  static ScalarField generic(std::function<cplx(const Vec3&)> fn, const Vec3& centre, double extent,
                             DecayTag tag = {});

  cplx operator()(const Vec3& x) const;

  ScalarField& operator+=(const ScalarField& o);
  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  ScalarField scaled(cplx s) const;
  ScalarField conjugated() const;
  ScalarField translated(const Vec3& v) const;

  std::span<const FieldTerm> terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  const DecayTag& decay() const { return decay_; }
  void set_decay(DecayTag t) { decay_ = t; }

  // Radius about p beyond which every term is below tol (Gaussians) or past its extent.
  double extent_about(const Vec3& p, double tol = 1e-16) const;
  // Centre about which the whole field is radial, if any.
  std::optional<Vec3> radial_centre() const;
  bool all_gaussian() const;

 private:
  std::vector<FieldTerm> terms_;
  DecayTag decay_{};
};

cplx eval_term(const FieldTerm& t, const Vec3& x);

// Profile p(rho) about a centre, stored as the reduced function w(rho) = rho p(rho).
struct AnchoredPiece {
  std::size_t centre = 0;
  RadialProfile reduced;
};

// free part + sum_j w_j(|x - y_j|) / |x - y_j|
struct CentredField {
  std::vector<Vec3> centres;
  std::optional<ScalarField> free;
  std::vector<AnchoredPiece> anchored;

  CentredField() = default;
  explicit CentredField(std::vector<Vec3> c) : centres(std::move(c)) {}
  static CentredField from(const ScalarField& u, std::vector<Vec3> centres = {});

  cplx operator()(const Vec3& x) const;
  // Anchored part only.
  cplx anchored_value(const Vec3& x) const;

  CentredField& operator+=(const CentredField& o);
  friend CentredField operator+(CentredField a, const CentredField& b) { return a += b; }
  CentredField scaled(cplx s) const;
  CentredField conjugated() const;
  CentredField translated(const Vec3& v) const;

  // Largest radius about p where the field is represented (anchored grid ends, free extent).
  double extent_about(const Vec3& p, double tol = 1e-16) const;
  bool has_free() const { return free.has_value() && !free->empty(); }
};

// Value of an anchored profile at distance rho; rho below the first node of an
// odd-reduced profile uses the extrapolated origin value.
cplx anchored_value(const RadialProfile& reduced, double rho);

}  // namespace pint
