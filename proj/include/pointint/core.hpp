#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pint {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

// Bad user input: malformed documents, violated preconditions.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A computation that could not reach its tolerance or hit a singular system.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

struct Configuration {
  std::vector<Vec3> centres;
  std::vector<double> alphas;

  std::size_t size() const { return centres.size(); }
  double dist(std::size_t j, std::size_t k) const { return distance(centres[j], centres[k]); }
  // Infinity for N = 1.
  double min_distance() const;
  double max_distance() const;
};

// Throws ValidationError on empty input, length mismatch, non-finite values or duplicate centres.
void validate(const Configuration& cfg);

// JSON document {"centres": [[x,y,z],...], "alphas": [...]}.
Configuration load_config(std::string_view document);
Configuration load_config_file(const std::string& path);
// Round-trips exactly through load_config (17 significant digits).
std::string dump_config(const Configuration& cfg);

// Staggered grid r_i = (i + 1/2) h, h = r_max / n. Never contains r = 0.
struct RadialGrid {
  double r_max = 1.0;
  std::size_t n = 2;

  double h() const { return r_max / static_cast<double>(n); }
  double node(std::size_t i) const { return (static_cast<double>(i) + 0.5) * h(); }
  std::vector<double> nodes() const;
};

RadialGrid build_grid(double r_max, std::size_t n);

enum class Parity { even, odd, none };

// Complex samples on a staggered grid. The parity tag says how the function
// continues to r < 0; `none` means one-sided stencils near the origin.
struct RadialProfile {
  RadialGrid grid;
  std::vector<cplx> values;
  Parity parity = Parity::even;

  RadialProfile() = default;
  RadialProfile(RadialGrid g, std::vector<cplx> v, Parity p);
  RadialProfile(RadialGrid g, Parity p) : RadialProfile(g, std::vector<cplx>(g.n), p) {}

  std::size_t size() const { return values.size(); }
  // 8-point Lagrange interpolation; zero beyond r_max.
  cplx at(double r) const;
  // Quadratic extrapolation from the three innermost nodes.
  cplx value_at_origin() const;
};

// Quadratic extrapolation to 0 of samples taken at h/2, 3h/2, 5h/2.
inline cplx extrapolate_to_origin(cplx f0, cplx f1, cplx f2) {
  return (15.0 * f0 - 10.0 * f1 + 3.0 * f2) / 8.0;
}

}  // namespace pint
