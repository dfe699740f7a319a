#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <ostream>

#include <CLI11.hpp>
#include <tbb/global_control.h>

#include "pointint/dynamics.hpp"
#include "pointint/gamma.hpp"
#include "pointint/lpprobe.hpp"
#include "pointint/norms.hpp"
#include "pointint/report.hpp"
#include "pointint/resolvent.hpp"
#include "pointint/shrink.hpp"
#include "pointint/waveop.hpp"

namespace pint::cli {

namespace {

using json = nlohmann::ordered_json;

struct Common {
  std::string config;
  std::string out = ".";
  std::string format = "csv";
  std::uint64_t seed = 1;
  int threads = 0;
};

void add_common(CLI::App* sc, Common& c, bool config_required) {
  auto* opt = sc->add_option("--config", c.config, "configuration JSON {centres, alphas}");
  if (config_required) opt->required();
  sc->add_option("--out", c.out, "output directory")->capture_default_str();
  sc->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sc->add_option("--seed", c.seed, "seed for randomised probe bases")->capture_default_str();
  sc->add_option("--threads", c.threads, "worker threads (0: all logical cores)")->capture_default_str();
}

// Test input: e^{-|x - at|^2 / width^2}, at defaulting to the first centre.
struct GaussianInput {
  double width = 1.0;
  std::vector<double> at;

  void add(CLI::App* sc) {
    sc->add_option("--width", width, "width of the Gaussian test input")->capture_default_str();
    sc->add_option("--at", at, "centre of the test input x,y,z (default: first centre)")->delimiter(',')->expected(3);
  }
  ScalarField field(const Configuration& cfg) const {
    if (!(width > 0.0)) throw ValidationError("--width must be positive");
    Vec3 c = cfg.centres.front();
    if (!at.empty()) c = {at[0], at[1], at[2]};
    return ScalarField::gaussian(1.0, 1.0 / (width * width), c);
  }
  void record(json& t) const { t["input_width"] = width; }
};

struct GridFlags {
  double r_max = 60.0;
  std::size_t n = 6000;

  void add(CLI::App* sc) {
    sc->add_option("--r-max", r_max, "radial grid extent")->capture_default_str();
    sc->add_option("--n", n, "radial grid nodes")->capture_default_str();
  }
  RadialGrid grid() const {
    if (!(r_max > 0.0) || n < 16) throw ValidationError("--r-max must be positive and --n at least 16");
    return build_grid(r_max, n);
  }
  void record(json& t) const {
    t["r_max"] = r_max;
    t["n"] = n;
  }
};

Report start(const std::string& command, const Common& c, const Configuration* cfg) {
  Report r;
  r.command = command;
  r.config_hash = cfg ? config_hash(*cfg) : std::string("none");
  r.summary["seed"] = c.seed;
  return r;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// Along the diagonal direction from the first centre, which avoids the coordinate axes.
std::vector<Vec3> ray(const Configuration& cfg, double r_max, std::size_t samples) {
  const double s = 1.0 / std::sqrt(3.0);
  std::vector<Vec3> pts;
  for (std::size_t i = 1; i <= samples; ++i) {
    const double r = r_max * static_cast<double>(i) / static_cast<double>(samples);
    pts.push_back(cfg.centres.front() + Vec3{r * s, r * s, r * s});
  }
  return pts;
}

double spectral_bound(const Configuration& cfg) {
  // Gershgorin on Gamma(i lambda): every eigenvalue is positive beyond this lambda.
  double amin = *std::min_element(cfg.alphas.begin(), cfg.alphas.end());
  const double n = static_cast<double>(cfg.size());
  const double off = cfg.size() > 1 ? (n - 1.0) / cfg.min_distance() : 0.0;
  return 1.1 * std::max(0.0, 4.0 * pi * (-amin) + off) + 1.0;
}

struct Command {
  CLI::App* app = nullptr;
  std::function<Report()> action;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-centre point-interaction Hamiltonian: spectrum, resolvent, wave operators, L^p probes, "
               "dispersive dynamics and the shrinking-potential limit"};
  app.require_subcommand(1);
  Common common;
  std::vector<Command> commands;
  Configuration cfg;
  auto load = [&]() {
    cfg = load_config_file(common.config);
    validate(cfg);
  };

  // spectrum
  double lambda_max = 0.0, root_tol = 1e-13;
  {
    auto* sc = app.add_subcommand("spectrum", "bound states lambda0 > 0 with energy -lambda0^2");
    add_common(sc, common, true);
    sc->add_option("--lambda-max", lambda_max, "search bound (0: Gershgorin bound)")->capture_default_str();
    sc->add_option("--root-tol", root_tol, "root tolerance in lambda")->capture_default_str();
    commands.push_back({sc, [&]() {
      load();
      const double lm = lambda_max > 0.0 ? lambda_max : spectral_bound(cfg);
      const auto states = find_bound_states(cfg, lm, root_tol);
      Report r = start("spectrum", common, &cfg);
      r.tolerances["lambda_max"] = lm;
      r.tolerances["root_tol"] = root_tol;
      Table t;
      t.columns = {"index", "lambda0", "energy", "norm_sq"};
      for (std::size_t j = 0; j < cfg.size(); ++j) {
        t.columns.push_back("c" + std::to_string(j + 1) + "_re");
        t.columns.push_back("c" + std::to_string(j + 1) + "_im");
      }
      for (std::size_t i = 0; i < states.size(); ++i) {
        std::vector<Cell> row{static_cast<std::int64_t>(i), states[i].lambda0, states[i].energy, states[i].norm_sq};
        for (Eigen::Index j = 0; j < states[i].coeffs.size(); ++j) {
          row.emplace_back(states[i].coeffs(j).real());
          row.emplace_back(states[i].coeffs(j).imag());
        }
        t.add(std::move(row));
      }
      r.summary["bound_states"] = states.size();
      r.tables.push_back(std::move(t));
      return r;
    }});
  }

  // resolvent
  std::vector<double> z_arg{0.0, 1.0};
  GaussianInput res_in;
  double res_rmax = 5.0;
  std::size_t res_samples = 50;
  ResolventOptions ropt;
  {
    auto* sc = app.add_subcommand("resolvent", "R(z^2) u for a Gaussian u, sampled along a ray");
    add_common(sc, common, true);
    sc->add_option("--z", z_arg, "spectral parameter re,im with Im z >= 0")->delimiter(',')->expected(2)->capture_default_str();
    res_in.add(sc);
    sc->add_option("--sample-r-max", res_rmax, "extent of the sample ray")->capture_default_str();
    sc->add_option("--samples", res_samples, "points on the sample ray")->capture_default_str();
    sc->add_option("--step", ropt.h, "radial step of the 1-D reductions")->capture_default_str();
    sc->add_option("--tail-tol", ropt.tail_tol, "integrand cut-off")->capture_default_str();
    commands.push_back({sc, [&]() {
      load();
      const cplx z(z_arg[0], z_arg[1]);
      const auto u = res_in.field(cfg);
      const auto res = resolvent_apply(cfg, z, u, ropt);
      Report r = start("resolvent", common, &cfg);
      r.tolerances["step"] = ropt.h;
      r.tolerances["tail_tol"] = ropt.tail_tol;
      res_in.record(r.tolerances);
      r.summary["z"] = complex_json(z);
      json q = json::array();
      for (Eigen::Index j = 0; j < res.charges.size(); ++j) q.push_back(complex_json(res.charges(j)));
      r.summary["charges"] = q;
      const auto pts = ray(cfg, res_rmax, res_samples);
      Table t;
      t.columns = {"r", "re", "im"};
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const cplx v = res.field(pts[i]);
        t.add({distance(pts[i], cfg.centres.front()), v.real(), v.imag()});
      }
      r.tables.push_back(std::move(t));
      return r;
    }});
  }

  // waveop
  GaussianInput w_in;
  GridFlags w_grid;
  std::string w_sign = "plus";
  double w_taper = 0.1, w_srmax = 6.0;
  std::size_t w_samples = 60;
  bool w_oracle = false;
  std::vector<double> w_schedule{0.04, 0.02, 0.01, 0.005, 0.0025, 0.00125};
  {
    auto* sc = app.add_subcommand("waveop", "W+ u (or W- u) for a Gaussian u");
    add_common(sc, common, true);
    w_in.add(sc);
    w_grid.add(sc);
    sc->add_option("--sign", w_sign, "plus or minus")->check(CLI::IsMember({"plus", "minus"}))->capture_default_str();
    sc->add_option("--taper", w_taper, "outer fraction of the reduced means that is tapered")->capture_default_str();
    sc->add_option("--sample-r-max", w_srmax, "extent of the sample ray")->capture_default_str();
    sc->add_option("--samples", w_samples, "points on the sample ray")->capture_default_str();
    sc->add_flag("--oracle", w_oracle, "cross-check <W u, u> against the Abel-limit oracle");
    sc->add_option("--abel-eps", w_schedule, "eps schedule of the Abel oracle")->delimiter(',')->capture_default_str();
    commands.push_back({sc, [&]() {
      load();
      const auto u = w_in.field(cfg);
      WaveOptions wo;
      wo.taper = w_taper;
      const WaveOperator W(cfg, w_grid.grid(), wo);
      const Sign sign = w_sign == "plus" ? Sign::plus : Sign::minus;
      const auto wu = W.apply(u, sign);
      Report r = start("waveop", common, &cfg);
      w_grid.record(r.tolerances);
      w_in.record(r.tolerances);
      r.tolerances["taper"] = w_taper;
      r.summary["sign"] = w_sign;
      const double n_in = l2_norm(u), n_out = l2_norm(wu);
      r.summary["norm_in"] = n_in;
      r.summary["norm_out"] = n_out;
      r.summary["isometry_defect"] = n_out / n_in - 1.0;
      if (w_oracle) {
        const cplx pw = inner_product(wu, CentredField::from(u));
        const auto ab = abel_pairing_oracle(cfg, sign == Sign::plus ? u : u.conjugated(), u, w_schedule);
        const cplx pa = sign == Sign::plus ? ab.value : std::conj(ab.value);
        r.tolerances["abel_eps"] = w_schedule;
        r.summary["pairing"] = complex_json(pw);
        r.summary["oracle"] = complex_json(pa);
        r.summary["oracle_relative_difference"] = std::abs(pw - pa) / std::abs(pa);
        r.summary["oracle_extrapolation_change"] = ab.extrapolation_change;
      }
      const auto pts = ray(cfg, w_srmax, w_samples);
      Table t;
      t.columns = {"r", "re", "im"};
      for (const auto& p : pts) {
        const cplx v = wu(p);
        t.add({distance(p, cfg.centres.front()), v.real(), v.imag()});
      }
      r.tables.push_back(std::move(t));
      return r;
    }});
  }

  // lp-scan
  std::vector<double> lp_p{1.5, 2.0, 2.5};
  GridFlags lp_grid;
  std::size_t lp_members = 10;
  LpOptions lp_opt;
  {
    auto* sc = app.add_subcommand("lp-scan", "||W+ u||_p / ||u||_p over a Gaussian family");
    add_common(sc, common, true);
    sc->add_option("--p", lp_p, "exponents")->delimiter(',')->capture_default_str();
    lp_grid.add(sc);
    sc->add_option("--members", lp_members, "family size")->capture_default_str();
    sc->add_option("--angular-tol", lp_opt.angular_tol, "relative angular convergence")->capture_default_str();
    commands.push_back({sc, [&]() {
      load();
      const auto fam = gaussian_family(cfg, lp_members);
      const auto tab = boundedness_scan(cfg, fam, lp_p, lp_grid.grid(), lp_opt);
      Report r = start("lp-scan", common, &cfg);
      lp_grid.record(r.tolerances);
      r.tolerances["angular_tol"] = lp_opt.angular_tol;
      Table t;
      t.columns = {"member", "p", "norm_in", "norm_out", "ratio"};
      for (const auto& row : tab.rows)
        t.add({static_cast<std::int64_t>(row.member), row.p, row.norm_in, row.norm_out, row.ratio});
      json per_p = json::array();
      for (std::size_t i = 0; i < tab.p_grid.size(); ++i)
        per_p.push_back({{"p", tab.p_grid[i]}, {"min_ratio", tab.min_ratio[i]}, {"max_ratio", tab.max_ratio[i]}});
      r.summary["ratios"] = per_p;
      r.tables.push_back(std::move(t));
      return r;
    }});
  }

  // p1-probe
  // The log law is asymptotic; radii well past the support keep the fit in that regime.
  std::vector<double> p1_R{50.0, 100.0, 200.0, 400.0, 800.0}, p1_eps{0.5, 0.25, 0.125}, p1_ball{10.0};
  P1Options p1_opt;
  {
    auto* sc = app.add_subcommand("p1-probe", "growth of ||(W+ - 1) u_eps||_1 on balls for the counterexample profile");
    add_common(sc, common, true);
    sc->add_option("--R", p1_R, "radii of the A(R) curve")->delimiter(',')->capture_default_str();
    sc->add_option("--eps", p1_eps, "scales for B(eps, R) and ||u_eps||_1")->delimiter(',')->capture_default_str();
    sc->add_option("--ball", p1_ball, "radii at which B is compared with A")->delimiter(',')->capture_default_str();
    sc->add_option("--step", p1_opt.h, "radial step for A(R)")->capture_default_str();
    sc->add_option("--wave-step", p1_opt.wave_h, "wave-operator grid step for B")->capture_default_str();
    sc->add_option("--agree-tol", p1_opt.agree_tol, "relative B vs A agreement")->capture_default_str();
    commands.push_back({sc, [&]() {
      load();
      p1_opt.R_ball = p1_ball;
      const auto rep = p1_blowup_scan(counterexample_profile, counterexample_support, p1_R, p1_eps, cfg, p1_opt);
      Report r = start("p1-probe", common, &cfg);
      r.tolerances["step"] = p1_opt.h;
      r.tolerances["wave_h"] = p1_opt.wave_h;
      r.tolerances["agree_tol"] = p1_opt.agree_tol;
      r.summary["moment"] = rep.moment;
      r.summary["stated_slope"] = rep.stated_slope;
      r.summary["derived_slope"] = rep.derived_slope;
      r.summary["fit_slope"] = rep.fit.slope;
      r.summary["fit_intercept"] = rep.fit.intercept;
      r.summary["fit_r2"] = rep.fit.r2;
      r.summary["l1"] = rep.l1;
      r.summary["orders_agree"] = rep.orders_agree;
      Table a;
      a.name = "A";
      a.columns = {"R", "A"};
      for (std::size_t i = 0; i < rep.R.size(); ++i) a.add({rep.R[i], rep.A[i]});
      Table b;
      b.name = "B";
      b.columns = {"eps", "R", "B", "A", "rel"};
      for (const auto& row : rep.rows) b.add({row.eps, row.R, row.B, row.A, row.rel});
      Table l;
      l.name = "l1";
      l.columns = {"eps", "l1"};
      for (std::size_t i = 0; i < p1_eps.size(); ++i) l.add({p1_eps[i], rep.l1_scaled[i]});
      r.tables = {std::move(a), std::move(b), std::move(l)};
      return r;
    }});
  }

  // p3-probe
  double p3_c = 1.0;
  std::vector<double> p3_delta{1e-2, 5e-3, 2e-3, 1e-3};
  GaussianInput p3_in;
  P3Options p3_opt;
  {
    auto* sc = app.add_subcommand("p3-probe", "log divergence of local L^3 norms of (R - R0)(-c^2) u");
    add_common(sc, common, true);
    sc->add_option("--c", p3_c, "spectral parameter z = i c")->capture_default_str();
    sc->add_option("--delta", p3_delta, "inner shell radii")->delimiter(',')->capture_default_str();
    sc->add_option("--centre", p3_opt.centre, "index of the probed centre")->capture_default_str();
    sc->add_option("--p", p3_opt.p, "exponent")->capture_default_str();
    sc->add_option("--delta0", p3_opt.delta0, "outer shell radius (0: automatic)")->capture_default_str();
    p3_in.add(sc);
    commands.push_back({sc, [&]() {
      load();
      const auto rep = p3_blowup_scan(cfg, p3_in.field(cfg), p3_c, p3_delta, p3_opt);
      Report r = start("p3-probe", common, &cfg);
      r.tolerances["p"] = p3_opt.p;
      p3_in.record(r.tolerances);
      r.summary["charge"] = complex_json(rep.charge);
      r.summary["predicted_slope"] = rep.predicted;
      r.summary["fit_slope"] = rep.fit.slope;
      r.summary["fit_r2"] = rep.fit.r2;
      r.summary["relative_error"] = std::abs(rep.fit.slope - rep.predicted) / rep.predicted;
      Table t;
      t.columns = {"delta", "log_inv_delta", "value"};
      for (std::size_t i = 0; i < rep.delta.size(); ++i) t.add({rep.delta[i], std::log(1.0 / rep.delta[i]), rep.value[i]});
      r.tables.push_back(std::move(t));
      return r;
    }});
  }

  // disperse and strichartz share the dynamics flags.
  GaussianInput d_in;
  GridFlags d_grid;
  DynamicsOptions d_opt;
  double d_p = 2.5, d_t0 = 1.0, d_t1 = 100.0, s_T = 10.0;
  std::size_t d_per_decade = 4;
  auto add_dynamics = [&](CLI::App* sc) {
    d_in.add(sc);
    d_grid.add(sc);
    sc->add_option("--p", d_p, "exponent in [2, 3)")->capture_default_str();
    sc->add_option("--kappa", d_opt.kappa, "output grid reaches r_max + 2 kappa |t|")->capture_default_str();
    sc->add_option("--h-out", d_opt.h_out, "output grid step for |t| > 1")->capture_default_str();
  };
  auto record_dynamics = [&](Report& r) {
    d_grid.record(r.tolerances);
    d_in.record(r.tolerances);
    r.tolerances["kappa"] = d_opt.kappa;
    r.tolerances["h_out"] = d_opt.h_out;
  };
  {
    auto* sc = app.add_subcommand("disperse", "decay exponent of ||e^{-itH} P_ac u||_p");
    add_common(sc, common, true);
    add_dynamics(sc);
    sc->add_option("--t0", d_t0, "first time")->capture_default_str();
    sc->add_option("--t1", d_t1, "last time")->capture_default_str();
    sc->add_option("--per-decade", d_per_decade, "times per decade")->capture_default_str();
    commands.push_back({sc, [&]() {
      load();
      d_opt.grid = d_grid.grid();
      const auto fit = dispersive_fit(cfg, d_in.field(cfg), d_p, geometric_times(d_t0, d_t1, d_per_decade), d_opt);
      Report r = start("disperse", common, &cfg);
      record_dynamics(r);
      r.summary["p"] = fit.p;
      r.summary["exponent"] = fit.exponent;
      r.summary["target"] = fit.target;
      r.summary["relative_error"] = std::abs(fit.exponent - fit.target) / std::abs(fit.target);
      r.summary["constant"] = fit.constant;
      r.summary["r2"] = fit.r2;
      Table t;
      t.columns = {"t", "norm"};
      for (std::size_t i = 0; i < fit.t.size(); ++i) t.add({fit.t[i], fit.norm[i]});
      r.tables.push_back(std::move(t));
      return r;
    }});
  }
  {
    auto* sc = app.add_subcommand("strichartz", "L^q(1/T, T; L^p) norm of e^{-itH} P_ac u");
    add_common(sc, common, true);
    add_dynamics(sc);
    sc->add_option("--T", s_T, "window [1/T, T]")->capture_default_str();
    commands.push_back({sc, [&]() {
      load();
      d_opt.grid = d_grid.grid();
      const auto u = d_in.field(cfg);
      const auto res = strichartz_window_norm(cfg, u, d_p, s_T, d_opt);
      Report r = start("strichartz", common, &cfg);
      record_dynamics(r);
      r.summary["p"] = res.p;
      r.summary["q"] = std::isfinite(res.q) ? json(res.q) : json("inf");
      r.summary["T"] = res.T;
      r.summary["value"] = res.value;
      r.summary["ratio"] = res.ratio;
      Table t;
      t.columns = {"t", "norm"};
      for (std::size_t i = 0; i < res.t.size(); ++i) t.add({res.t[i], res.norm[i]});
      r.tables.push_back(std::move(t));
      return r;
    }});
  }

  // shrink
  double well_radius = 1.0, well_depth = 0.0, sh_lambda = 1.0, sh_beta = 2.0, u_width = 1.0, v_width = 1.25;
  std::vector<double> sh_eps{0.2, 0.1, 0.05, 0.025}, sh_pair_eps;
  RankOneOptions sh_opt;
  {
    auto* sc = app.add_subcommand("shrink", "shrinking square well: resonance, rank-one limit, weak convergence");
    add_common(sc, common, false);
    sc->add_option("--well-radius", well_radius, "square-well radius")->capture_default_str();
    sc->add_option("--well-depth", well_depth, "square-well depth V0 < 0 (0: tuned to a resonance)")->capture_default_str();
    sc->add_option("--lambda", sh_lambda, "spectral parameter of the rank-one check")->capture_default_str();
    sc->add_option("--eps", sh_eps, "scales of the rank-one check")->delimiter(',')->capture_default_str();
    sc->add_option("--beta", sh_beta, "weight exponent in (3/2, decay/2)")->capture_default_str();
    sc->add_option("--probes", sh_opt.probes, "probe basis size")->capture_default_str();
    sc->add_option("--pairing-eps", sh_pair_eps, "scales at which <W_eps u, v> is evaluated")->delimiter(',');
    sc->add_option("--u-width", u_width, "width of the Gaussian u")->capture_default_str();
    sc->add_option("--v-width", v_width, "width of the Gaussian v")->capture_default_str();
    commands.push_back({sc, [&]() {
      if (!common.config.empty()) load();
      if (!(u_width > 0.0) || !(v_width > 0.0)) throw ValidationError("widths must be positive");
      const double depth = well_depth != 0.0 ? well_depth : tuned_well_depth(well_radius);
      const auto V = RadialPotential::square_well(depth, well_radius);
      const auto res = resonance_function(V, sh_opt.shrink);
      sh_opt.seed = common.seed;
      const auto curve = rank_one_limit_check(V, sh_lambda, sh_eps, sh_beta, sh_opt);
      Report r = start("shrink", common, common.config.empty() ? nullptr : &cfg);
      r.tolerances["resonance_tol"] = sh_opt.shrink.resonance_tol;
      r.tolerances["panels"] = sh_opt.shrink.panels;
      r.tolerances["order"] = sh_opt.shrink.order;
      r.tolerances["probes"] = sh_opt.probes;
      r.tolerances["beta"] = sh_beta;
      r.summary["well_depth"] = depth;
      r.summary["well_radius"] = well_radius;
      r.summary["a"] = res.a;
      r.summary["tail"] = res.tail;
      r.summary["norm_check"] = res.norm_check;
      r.summary["mismatch"] = res.mismatch;
      r.summary["strictly_decreasing"] = curve.strictly_decreasing;
      r.summary["target_norm"] = curve.target_norm;
      Table t;
      t.name = "rank_one";
      t.columns = {"eps", "residual"};
      for (std::size_t i = 0; i < curve.eps.size(); ++i) t.add({curve.eps[i], curve.residual[i]});
      r.tables.push_back(std::move(t));
      if (!sh_pair_eps.empty()) {
        const auto u = radial_gaussian(1.0, 1.0 / (u_width * u_width));
        const auto v = radial_gaussian(1.0, 1.0 / (v_width * v_width));
        const cplx lim = limit_pairing(u, v);
        r.summary["limit_pairing"] = complex_json(lim);
        Table p;
        p.name = "pairing";
        p.columns = {"eps", "re", "im", "relative_error"};
        for (double e : sh_pair_eps) {
          const auto pr = weps_pairing(V, e, u, v);
          p.add({e, pr.value.real(), pr.value.imag(), std::abs(pr.value - lim) / std::abs(lim)});
        }
        r.tables.push_back(std::move(p));
      }
      return r;
    }});
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << e.what() << "\n";
    return app.get_subcommands().empty() ? 1 : 2;
  }

  std::unique_ptr<tbb::global_control> limit;
  if (common.threads > 0)
    limit = std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism,
                                                  static_cast<std::size_t>(common.threads));
  try {
    for (const auto& c : commands) {
      if (!c.app->parsed()) continue;
      Report r = c.action();
      const auto written = emit_report(r, common.format == "json" ? ReportFormat::json : ReportFormat::csv, common.out);
      for (const auto& w : written) out << w << "\n";
      return 0;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

}  // namespace pint::cli
