#include "pointint/core.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace pint {

double Configuration::min_distance() const {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < size(); ++j)
    for (std::size_t k = j + 1; k < size(); ++k) d = std::min(d, dist(j, k));
  return d;
}

double Configuration::max_distance() const {
  double d = 0.0;
  for (std::size_t j = 0; j < size(); ++j)
    for (std::size_t k = j + 1; k < size(); ++k) d = std::max(d, dist(j, k));
  return d;
}

void validate(const Configuration& cfg) {
  if (cfg.centres.empty()) throw ValidationError("configuration has no centres");
  if (cfg.centres.size() != cfg.alphas.size())
    throw ValidationError("length mismatch: " + std::to_string(cfg.centres.size()) + " centres, " +
                          std::to_string(cfg.alphas.size()) + " alphas");
  for (double a : cfg.alphas)
    if (!std::isfinite(a)) throw ValidationError("non-finite alpha");
  for (const auto& y : cfg.centres)
    for (double c : y)
      if (!std::isfinite(c)) throw ValidationError("non-finite centre coordinate");
  if (cfg.size() > 1 && !(cfg.min_distance() > 0.0)) throw ValidationError("duplicate centres");
}

Configuration load_config(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("centres") || !doc.contains("alphas"))
    throw ValidationError("config needs arrays \"centres\" and \"alphas\"");
  Configuration cfg;
  try {
    for (const auto& c : doc.at("centres")) {
      if (!c.is_array() || c.size() != 3) throw ValidationError("each centre must be [x, y, z]");
      cfg.centres.push_back({c[0].get<double>(), c[1].get<double>(), c[2].get<double>()});
    }
    for (const auto& a : doc.at("alphas")) cfg.alphas.push_back(a.get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config type error: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

Configuration load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str());
}

std::string dump_config(const Configuration& cfg) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << "{\"centres\": [";
  for (std::size_t j = 0; j < cfg.size(); ++j) {
    const auto& y = cfg.centres[j];
    os << (j ? ", " : "") << '[' << y[0] << ", " << y[1] << ", " << y[2] << ']';
  }
  os << "], \"alphas\": [";
  for (std::size_t j = 0; j < cfg.size(); ++j) os << (j ? ", " : "") << cfg.alphas[j];
  os << "]}";
  return os.str();
}

RadialGrid build_grid(double r_max, std::size_t n) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw ValidationError("grid r_max must be positive");
  if (n < 2) throw ValidationError("grid needs n >= 2");
  return RadialGrid{r_max, n};
}

std::vector<double> RadialGrid::nodes() const {
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = node(i);
  return r;
}

RadialProfile::RadialProfile(RadialGrid g, std::vector<cplx> v, Parity p)
    : grid(g), values(std::move(v)), parity(p) {
  if (values.size() != grid.n) throw ValidationError("profile length does not match grid");
}

cplx RadialProfile::at(double r) const {
  const double h = grid.h();
  const auto n = static_cast<long>(grid.n);
  const long kStencil = std::min(8L, n);
  if (r < 0.0) {
    switch (parity) {
      case Parity::even: return at(-r);
      case Parity::odd: return -at(-r);
      case Parity::none: break;
    }
  }
  if (r > grid.r_max) return 0.0;
  // continuous index: node i sits at x = i
  const double x = r / h - 0.5;
  long first = static_cast<long>(std::floor(x)) - kStencil / 2 + 1;
  if (parity == Parity::none) first = std::max(first, 0L);
  first = std::min(first, n - kStencil);
  auto sample = [&](long i) -> cplx {
    if (i >= 0) return values[static_cast<std::size_t>(i)];
    // node i < 0 mirrors node -1-i
    const cplx v = values[static_cast<std::size_t>(-1 - i)];
    return parity == Parity::odd ? -v : v;
  };
  cplx acc = 0.0;
  for (long a = first; a < first + kStencil; ++a) {
    double w = 1.0;
    for (long b = first; b < first + kStencil; ++b)
      if (b != a) w *= (x - static_cast<double>(b)) / static_cast<double>(a - b);
    acc += w * sample(a);
  }
  return acc;
}

cplx RadialProfile::value_at_origin() const {
  return extrapolate_to_origin(values.at(0), values.at(1), values.at(2));
}

}  // namespace pint
