#include "qcurv/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "qcurv/verify.hpp"

namespace qcurv {

namespace {

const std::set<std::string> kCommands{"indicial", "kernel", "solve", "sweep", "ucurve", "expand", "verify"};
const std::set<std::string> kChecks{"bessel", "covariance", "asymptotics"};

class HelpRequested : public Error {
 public:
  using Error::Error;
};

double d(real v) { return static_cast<double>(v); }

Json finite_or_null(real v) { return std::isfinite(v) ? Json(d(v)) : Json(nullptr); }

template <class T>
T json_get(const Json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

void apply_json(RunConfig& c, const Json& j) {
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const Json& v = it.value();
    if (v.is_null()) {
      if (k == "alpha") c.alpha.reset();
      else if (k == "preset") c.preset.reset();
      else if (k == "gammas") c.gammas.reset();
      else if (k == "r_max") c.r_max.reset();
      else throw ConfigError("config key '" + k + "' cannot be null");
      continue;
    }
    if (k == "command") c.command = json_get<std::string>(v, k);
    else if (k == "check") c.check = json_get<std::string>(v, k);
    else if (k == "n") c.n = json_get<int>(v, k);
    else if (k == "alpha") c.alpha = json_get<double>(v, k);
    else if (k == "preset") c.preset = json_get<std::string>(v, k);
    else if (k == "gammas") c.gammas = json_get<std::array<double, 3>>(v, k);
    else if (k == "r_max") c.r_max = json_get<double>(v, k);
    else if (k == "points") c.points = json_get<std::size_t>(v, k);
    else if (k == "r_in") c.r_in = json_get<double>(v, k);
    else if (k == "amplitudes") c.amplitudes = json_get<std::vector<double>>(v, k);
    else if (k == "amplitude") c.amplitudes = {json_get<double>(v, k)};
    else if (k == "curvature") c.curvature = json_get<std::string>(v, k);
    else if (k == "nu") c.nu = json_get<double>(v, k);
    else if (k == "epsilon") c.epsilon = json_get<double>(v, k);
    else if (k == "tol") c.tol = json_get<double>(v, k);
    else if (k == "max_iter") c.max_iter = json_get<int>(v, k);
    else if (k == "pairs") c.pairs = json_get<int>(v, k);
    else if (k == "seed") c.seed = json_get<std::uint64_t>(v, k);
    else if (k == "workers") c.workers = json_get<unsigned>(v, k);
    else if (k == "format") c.format = json_get<std::string>(v, k);
    else if (k == "out") c.out_dir = json_get<std::string>(v, k);
    else throw ConfigError("unknown config key '" + k + "'");
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path);
  try {
    return Json::parse(is);
  } catch (const Json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

struct CurvatureSpec {
  std::string kind;  // hyperbolic constant bump
  std::optional<double> value;
};

CurvatureSpec parse_curvature(const std::string& s) {
  if (s == "hyperbolic") return {"hyperbolic", std::nullopt};
  auto colon = s.find(':');
  std::string kind = s.substr(0, colon);
  if (colon == std::string::npos || (kind != "constant" && kind != "bump"))
    throw ConfigError("curvature must be hyperbolic, constant:<value>, bump:<delta> or bump:auto (got '" + s + "')");
  std::string arg = s.substr(colon + 1);
  if (kind == "bump" && arg == "auto") return {kind, std::nullopt};
  try {
    std::size_t used = 0;
    double v = std::stod(arg, &used);
    if (used != arg.size() || !std::isfinite(v)) throw std::invalid_argument(arg);
    return {kind, v};
  } catch (const std::exception&) {
    throw ConfigError("cannot parse curvature value '" + arg + "'");
  }
}

void validate(const RunConfig& c, bool n_explicit) {
  Dimension dim(c.n);
  (void)dim;
  if (c.alpha && std::fabs(*c.alpha + 1) < 1e-12)
    throw ConfigError("alpha = -1 makes the U-equation second order; no fourth-order problem to solve");
  if (c.preset) DetParams::from_name(*c.preset);
  if (c.gammas) {
    DetParams p = DetParams::custom((*c.gammas)[0], (*c.gammas)[1], (*c.gammas)[2]);
    if (std::fabs(p.alpha() + 1) < 1e-12L) throw ConfigError("gammas give alpha = -1 (second-order U-equation)");
  }
  if ((c.alpha ? 1 : 0) + (c.preset ? 1 : 0) + (c.gammas ? 1 : 0) > 1)
    throw ConfigError("give at most one of alpha, preset, gammas");
  if (c.command.empty()) throw ConfigError("missing command (one of indicial kernel solve sweep ucurve expand verify)");
  if (!kCommands.count(c.command)) throw ConfigError("unknown command '" + c.command + "'");
  if (c.command == "verify") {
    if (!kChecks.count(c.check)) throw ConfigError("verify needs one of bessel, covariance, asymptotics");
  } else if (!c.check.empty()) {
    throw ConfigError("unexpected argument '" + c.check + "'");
  }
  if (c.u_case() && n_explicit && c.n != 4) throw ConfigError("U-curvature problems are four-dimensional");
  if (c.command == "sweep" && c.u_case()) throw ConfigError("sweep runs the Q family only");
  if (c.points < 64) throw ConfigError("points must be at least 64");
  if (c.r_max && !(*c.r_max > 3)) throw ConfigError("r_max must exceed 3");
  if (!(c.r_in > 0) || !(c.r_in < c.grid_r_max() - 3)) throw ConfigError("r_in must lie in (0, r_max - 3)");
  if (c.amplitudes.empty()) throw ConfigError("no amplitude given");
  for (double a : c.amplitudes)
    if (!std::isfinite(a)) throw ConfigError("amplitudes must be finite");
  bool single = c.command == "solve" || c.command == "ucurve" || c.command == "expand";
  if (single && c.amplitudes.size() != 1) throw ConfigError(c.command + " takes one amplitude (use sweep for several)");
  CurvatureSpec cs = parse_curvature(c.curvature);
  if (c.u_case() && cs.kind != "hyperbolic") throw ConfigError("U problems use the hyperbolic target only");
  if (!(c.epsilon > 0) || !(c.tol > 0) || c.max_iter < 1) throw ConfigError("epsilon, tol and max_iter must be positive");
  if (c.nu >= 0 && !c.u_case()) {
    try {
      admissible_weight(Dimension(c.n), c.nu);
    } catch (const PreconditionError& e) {
      throw ConfigError(e.what());
    }
  }
  if (c.pairs < 1) throw ConfigError("pairs must be positive");
  if (c.format != "json" && c.format != "csv") throw ConfigError("format must be json or csv");
}

// ---------------------------------------------------------------------------

struct Sink {
  const RunConfig& cfg;
  std::ostream& out;

  std::filesystem::path path(const std::string& stem, const std::string& ext) const {
    return cfg.out_dir / (stem + ext);
  }
  void report(const std::string& stem, const Json& j) const {
    if (cfg.format == "json") {
      write_text_file(path(stem, ".json"), dump_json(j));
      out << "wrote " << path(stem, ".json").string() << "\n";
    } else {
      std::ostringstream os;
      write_flat_csv(os, j);
      write_text_file(path(stem + "_report", ".csv"), os.str());
      out << "wrote " << path(stem + "_report", ".csv").string() << "\n";
    }
  }
  template <class T, class Writer>
  void table(const std::string& stem, const T& data, Writer w) const {
    if (cfg.format != "csv") return;
    std::ostringstream os;
    w(os, data);
    write_text_file(path(stem, ".csv"), os.str());
    out << "wrote " << path(stem, ".csv").string() << "\n";
  }
};

Json envelope(const RunConfig& cfg, const std::string& status, Json result) {
  return Json{{"command", cfg.command}, {"config", config_json(cfg)}, {"status", status}, {"result", std::move(result)}};
}

IterationConfig iteration(const RunConfig& c) {
  IterationConfig it;
  it.epsilon = c.epsilon;
  it.tol = c.tol;
  it.max_iter = c.max_iter;
  return it;
}

GridPtr q_grid(const RunConfig& c) { return RadialGrid::uniform(c.grid_r_max(), c.points); }

Json spectrum_json(const BoundarySpectrum& s) {
  Json j = to_json(s);
  std::vector<cplx> comp = companion_roots(s.poly.coefficients());
  std::sort(comp.begin(), comp.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  j["companion_roots"] = Json::array();
  for (cplx z : comp) j["companion_roots"].push_back(Json{{"re", z.real()}, {"im", z.imag()}});
  return j;
}

Json det_json(const DetParams& p) {
  return Json{{"gamma1", d(p.gamma1)}, {"gamma2", d(p.gamma2)}, {"gamma3", d(p.gamma3)},
              {"alpha", d(p.alpha())},  {"preset", p.tag()},      {"U_hyperbolic", d(u_curvature_hyperbolic(p))}};
}

Json target_json(const TargetCurvature& t, const std::string& spec, std::optional<real> delta) {
  Json j{{"spec", spec}, {"nu", d(t.nu)}, {"deviation_norm", finite_or_null(t.deviation_norm)}, {"decay_ok", t.decay_ok}};
  if (delta) j["delta"] = d(*delta);
  return j;
}

struct BuiltTarget {
  TargetCurvature t;
  std::optional<real> delta;
};

BuiltTarget make_target(const RunConfig& c, Dimension dim, const Machinery& m, real amplitude) {
  CurvatureSpec cs = parse_curvature(c.curvature);
  const real nu = c.nu;
  if (cs.kind == "hyperbolic") return {TargetCurvature::hyperbolic(dim, m.op.grid(), nu), std::nullopt};
  if (cs.kind == "constant") return {TargetCurvature::constant(dim, m.op.grid(), *cs.value, nu), std::nullopt};
  real delta = cs.value ? static_cast<real>(*cs.value) : bump_closeness_bound(m, dim, amplitude) / 2;
  return {TargetCurvature::bump(dim, m.op.grid(), delta, nu), delta};
}

std::string status_of(bool ok) { return ok ? "ok" : "not_converged"; }

// Q~ - f recomputed from the solution through the curvature transformation law
real q_check(const RadialFunction& u, const TargetCurvature& t, Dimension dim) {
  RadialFunction q = q_of_conformal(ConformalFactor::for_dimension(dim, u), dim);
  return (q - t.f).sup_norm(interior_window(*u.grid()));
}

Json weighted_norms_json(const RadialFunction& u, real nu) {
  Json j = Json::array();
  for (int k = 0; k <= 4; ++k) j.push_back(finite_or_null(weighted_norm(u, nu, k)));
  return j;
}

// finiteness of sup x^{-nu}|u| just below and above the leading exponent p
Json weight_flip_json(const RadialFunction& u, real p) {
  real lo = weighted_norm(u, 0.9L * p, 0), hi = weighted_norm(u, 1.1L * p, 0);
  return Json{{"nu_below", d(0.9L * p)},
              {"nu_above", d(1.1L * p)},
              {"norm_below", finite_or_null(lo)},
              {"norm_above", finite_or_null(hi)},
              {"finite_below", std::isfinite(lo)},
              {"finite_above", std::isfinite(hi)}};
}

// ---------------------------------------------------------------------------

int cmd_indicial(const RunConfig& c, const Sink& sink) {
  Json r;
  if (c.u_case()) {
    r["spectrum"] = spectrum_json(u_indicial_spectrum(c.u_alpha()));
    if (c.preset || c.gammas) r["parameters"] = det_json(c.det_params());
  } else {
    Dimension dim(c.n);
    r["spectrum"] = spectrum_json(q_indicial_spectrum(dim));
    r["constants"] = to_json(hyperbolic_curvature_report(dim));
    r["oscillation_frequency"] = std::sqrt(static_cast<double>(c.n * c.n + 2 * c.n - 9)) / 2;
  }
  Json rep = envelope(c, "ok", r);
  sink.report("indicial", rep);
  sink.out << "indicial: " << r["spectrum"]["roots"].size() << " roots\n";
  return kExitOk;
}

int cmd_kernel(const RunConfig& c, const Sink& sink) {
  FactoredOperator op = c.u_case() ? FactoredOperator::assemble_u(c.u_alpha(), u_grid(c.det_params(), c.grid_r_max(), c.points, c.r_in))
                                   : FactoredOperator::assemble_q(Dimension(c.n), q_grid(c));
  const real a = c.amplitudes.front();
  KernelElement k = kernel_element(op, a);
  Json r = to_json(k, op);
  r["spectrum"] = spectrum_json(op.spectrum());
  r["weight_flip"] = weight_flip_json(*k.khat, op.kernel_form().p);
  r["khat_sup"] = d(k.khat->sup_norm());
  sink.report("kernel", envelope(c, "ok", r));
  Profile prof{op.grid(), {}};
  prof.add("khat", *k.khat);
  prof.add("kernel", k.profile);
  sink.table("kernel", prof, write_profile_csv);
  sink.out << "kernel: envelope exponent " << k.envelope_exponent << ", free-fit frequency " << k.free_fit.beta << "\n";
  return kExitOk;
}

int cmd_solve(const RunConfig& c, const Sink& sink) {
  Dimension dim(c.n);
  Machinery m = Machinery::build(FactoredOperator::assemble_q(dim, q_grid(c)));
  const real a = c.amplitudes.front();
  BuiltTarget bt = make_target(c, dim, m, a);
  SolveResult res = fixed_point_solve(a, bt.t, iteration(c), m);
  Json r{{"report", to_json(res.report)}, {"target", target_json(bt.t, c.curvature, bt.delta)}};
  Profile prof{m.op.grid(), {}};
  prof.add("u", res.u);
  if (res.report.converged) {
    ConformalFactor cf = ConformalFactor::for_dimension(dim, res.u);
    r["q_check"] = d(q_check(res.u, bt.t, dim));
    prof.add("Q_tilde", q_of_conformal(cf, dim));
    prof.add("R_tilde", scalar_of_conformal(cf, dim));
  }
  sink.report("solve", envelope(c, status_of(res.report.converged), r));
  sink.table("solve", prof, write_profile_csv);
  const auto& rep = res.report;
  if (rep.converged)
    sink.out << "solve: converged in " << rep.iterations << " iterations, residual " << d(rep.residual) << "\n";
  else
    sink.out << "solve: not converged (" << rep.failure << ")\n";
  return rep.converged ? kExitOk : kExitNotConverged;
}

int cmd_sweep(const RunConfig& c, const Sink& sink) {
  Dimension dim(c.n);
  Machinery m = Machinery::build(FactoredOperator::assemble_q(dim, q_grid(c)));
  std::vector<real> amps(c.amplitudes.begin(), c.amplitudes.end());
  real a_max = 0;
  for (real a : amps) a_max = std::max(a_max, std::fabs(a));
  BuiltTarget bt = make_target(c, dim, m, a_max);
  SweepResult sw = sweep_family(amps, bt.t, iteration(c), m, c.workers);
  const real ksup = m.kernel.khat->sup_norm();
  bool all = true;
  Json reports = Json::array();
  Table tab{{"amplitude", "converged", "iterations", "residual", "p1_amplitude", "correction_norm"}, {}};
  for (const auto& rep : sw.reports) {
    all = all && rep.converged;
    reports.push_back(to_json(rep));
    tab.rows.push_back({d(rep.amplitude), rep.converged ? 1.0 : 0.0, static_cast<double>(rep.iterations), d(rep.residual),
                        d(rep.p1_amplitude), d(rep.correction_norm)});
  }
  Json dist = Json::array(), sep = Json::array();
  real min_ratio = kDivergent;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < amps.size(); ++j) row.push_back(finite_or_null(sw.distances[i][j]));
    dist.push_back(row);
    for (std::size_t j = i + 1; j < amps.size(); ++j) {
      real gap = std::fabs(amps[i] - amps[j]) * ksup;
      if (gap == 0 || !std::isfinite(sw.distances[i][j])) continue;
      real ratio = sw.distances[i][j] / gap;
      min_ratio = std::min(min_ratio, ratio);
      sep.push_back(Json{{"i", i}, {"j", j}, {"distance", d(sw.distances[i][j])}, {"ratio", d(ratio)}});
    }
  }
  Json r{{"reports", reports},
         {"distances", dist},
         {"separations", sep},
         {"min_separation_ratio", finite_or_null(min_ratio)},
         {"khat_sup", d(ksup)},
         {"target", target_json(bt.t, c.curvature, bt.delta)}};
  sink.report("sweep", envelope(c, status_of(all), r));
  sink.table("sweep", tab, write_table_csv);
  sink.out << "sweep: " << amps.size() << " entries, " << (all ? "all converged" : "some entries failed") << "\n";
  return all ? kExitOk : kExitNotConverged;
}

int cmd_ucurve(const RunConfig& c, const Sink& sink) {
  DetParams p = c.det_params();
  Machinery m = u_machinery(p, c.grid_r_max(), c.points, c.r_in);
  SolveResult res = u_fixed_point_solve(c.amplitudes.front(), p, iteration(c), m);
  Json r{{"report", to_json(res.report)},
         {"parameters", det_json(p)},
         {"spectrum", to_json(m.op.spectrum())},
         {"domain", m.op.grid()->has_origin() ? "ball" : "end"}};
  Profile prof{m.op.grid(), {}};
  prof.add("w", res.u);
  if (res.report.converged) prof.add("U_tilde", u_curvature_of(res.u, p));
  sink.report("ucurve", envelope(c, status_of(res.report.converged), r));
  sink.table("ucurve", prof, write_profile_csv);
  if (res.report.converged)
    sink.out << "ucurve: " << p.tag() << " converged in " << res.report.iterations << " iterations, residual "
             << d(res.report.residual) << "\n";
  else
    sink.out << "ucurve: " << p.tag() << " not converged (" << res.report.failure << ")\n";
  return res.report.converged ? kExitOk : kExitNotConverged;
}

int cmd_expand(const RunConfig& c, const Sink& sink) {
  const real a = c.amplitudes.front();
  Json r;
  real nu = 0, p = 0;
  std::optional<ScalarAsymptotics> sa;
  SolveResult res = [&] {
    if (c.u_case()) {
      DetParams dp = c.det_params();
      Machinery m = u_machinery(dp, c.grid_r_max(), c.points, c.r_in);
      p = m.op.kernel_form().p;
      nu = c.nu >= 0 ? static_cast<real>(c.nu) : 0.8L * p;
      r["parameters"] = det_json(dp);
      return u_fixed_point_solve(a, dp, iteration(c), m);
    }
    Dimension dim(c.n);
    Machinery m = Machinery::build(FactoredOperator::assemble_q(dim, q_grid(c)));
    BuiltTarget bt = make_target(c, dim, m, a);
    SolveResult out = fixed_point_solve(a, bt.t, iteration(c), m);
    p = m.op.kernel_form().p;
    nu = bt.t.nu;
    r["target"] = target_json(bt.t, c.curvature, bt.delta);
    if (out.report.converged) {
      sa = scalar_asymptotics(out.u, dim);
      Json wv = Json::array();
      for (real v : sa->window_values) wv.push_back(d(v));
      r["scalar_asymptotics"] =
          Json{{"coefficient", d(sa->coefficient)}, {"window_values", wv}, {"stated", d(stated_scalar_coefficient(dim))}};
    }
    return out;
  }();
  r["converged"] = res.report.converged;
  r["expansion"] = res.report.expansion ? to_json(*res.report.expansion) : Json(nullptr);
  r["nu"] = d(nu);
  r["weighted_norms"] = weighted_norms_json(res.u, nu);
  r["weight_flip"] = weight_flip_json(res.u, p);
  if (!res.report.converged) r["failure"] = res.report.failure;
  sink.report("expand", envelope(c, status_of(res.report.converged), r));
  if (sa) {
    Table tab{{"r_mid", "coefficient"}, {}};
    for (std::size_t i = 0; i < sa->window_values.size(); ++i) tab.rows.push_back({d(sa->window_mid[i]), d(sa->window_values[i])});
    sink.table("expand", tab, write_table_csv);
  }
  sink.out << "expand: " << (res.report.expansion ? "leading exponent " + std::to_string(d(res.report.expansion->leading_exponent))
                                                  : std::string("no expansion fit"))
           << "\n";
  return res.report.converged ? kExitOk : kExitNotConverged;
}

int verify_bessel(const RunConfig& c, const Sink& sink) {
  bool ok = true;
  Json checks = Json::array();
  Table tab{{"order_re", "order_im", "ode_residual", "wronskian_error", "growth_I", "growth_K"}, {}};
  for (const BesselCheck& b : bessel_checks()) {
    bool pass = b.ode_residual < 1e-8 && b.wronskian_error < 1e-8 && b.dichotomy;
    ok = ok && pass;
    checks.push_back(Json{{"label", b.label},
                          {"order", Json{{"re", b.order.real()}, {"im", b.order.imag()}}},
                          {"ode_residual", b.ode_residual},
                          {"wronskian_error", b.wronskian_error},
                          {"growth_I", b.growth_I},
                          {"growth_K", b.growth_K},
                          {"dichotomy", b.dichotomy},
                          {"pass", pass}});
    tab.rows.push_back({b.order.real(), b.order.imag(), b.ode_residual, b.wronskian_error, b.growth_I, b.growth_K});
  }
  sink.report("verify_bessel", envelope(c, ok ? "ok" : "check_failed", Json{{"checks", checks}, {"pass", ok}}));
  sink.table("verify_bessel", tab, write_table_csv);
  sink.out << "verify bessel: " << (ok ? "pass" : "FAIL") << "\n";
  return ok ? kExitOk : kExitNotConverged;
}

int verify_covariance(const RunConfig& c, const Sink& sink) {
  CovarianceStudy s = covariance_study(Dimension(c.n), c.pairs, c.seed, c.points, c.grid_r_max());
  bool ok = s.worst_ratio >= 3.5L;
  Table tab{{"pair", "defect_coarse", "defect_fine", "ratio"}, {}};
  Json pairs = Json::array();
  for (std::size_t i = 0; i < s.coarse.size(); ++i) {
    pairs.push_back(Json{{"coarse", d(s.coarse[i])}, {"fine", d(s.fine[i])}, {"ratio", d(s.coarse[i] / s.fine[i])}});
    tab.rows.push_back({static_cast<double>(i), d(s.coarse[i]), d(s.fine[i]), d(s.coarse[i] / s.fine[i])});
  }
  Json r{{"n", s.n},
         {"coarse_points", s.coarse_points},
         {"fine_points", s.fine_points},
         {"pairs", pairs},
         {"worst_ratio", d(s.worst_ratio)},
         {"required_ratio", 3.5},
         {"pass", ok}};
  sink.report("verify_covariance", envelope(c, ok ? "ok" : "check_failed", r));
  sink.table("verify_covariance", tab, write_table_csv);
  sink.out << "verify covariance: worst refinement ratio " << d(s.worst_ratio) << (ok ? " (pass)" : " (FAIL)") << "\n";
  return ok ? kExitOk : kExitNotConverged;
}

int verify_asymptotics(const RunConfig& c, const Sink& sink) {
  AsymptoticsStudy s = asymptotics_study(Dimension(c.n), c.amplitudes.front(), c.grid_r_max(), c.points);
  bool ok = s.converged && s.relative_error <= 0.01L;
  Json wv = Json::array(), wm = Json::array();
  for (real v : s.measured.window_values) wv.push_back(d(v));
  for (real v : s.measured.window_mid) wm.push_back(d(v));
  Json r{{"n", s.n},
         {"converged", s.converged},
         {"coefficient", d(s.measured.coefficient)},
         {"window_values", wv},
         {"window_mid", wm},
         {"stated", d(s.stated)},
         {"linearized", d(s.linearized)},
         {"relative_error", d(s.relative_error)},
         {"pass", ok}};
  sink.report("verify_asymptotics", envelope(c, ok ? "ok" : "check_failed", r));
  Table tab{{"r_mid", "coefficient"}, {}};
  for (std::size_t i = 0; i < s.measured.window_values.size(); ++i)
    tab.rows.push_back({d(s.measured.window_mid[i]), d(s.measured.window_values[i])});
  sink.table("verify_asymptotics", tab, write_table_csv);
  sink.out << "verify asymptotics: coefficient " << d(s.measured.coefficient) << " vs stated " << d(s.stated)
           << (ok ? " (pass)" : " (FAIL)") << "\n";
  return ok ? kExitOk : kExitNotConverged;
}

}  // namespace

double RunConfig::u_alpha() const {
  if (alpha) return *alpha;
  return static_cast<double>(det_params().alpha());
}

DetParams RunConfig::det_params() const {
  if (gammas) return DetParams::custom((*gammas)[0], (*gammas)[1], (*gammas)[2]);
  if (preset) return DetParams::from_name(*preset);
  if (alpha) return DetParams::custom(0, 12 * static_cast<real>(*alpha), 1);
  return DetParams::make(DetPreset::conformal_laplacian);
}

double RunConfig::grid_r_max() const {
  if (r_max) return *r_max;
  return u_case() || command == "ucurve" ? 18 : 12;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Constant Q- and U-curvature metrics on the Poincare ball (radial data)", "qcurve"};
  RunConfig c;
  if (const char* env = std::getenv("QCURVE_OUT"); env && *env) c.out_dir = env;
  RunConfig cli;
  std::string config_path, out_dir;
  double alpha = 0, r_max = 0;
  std::string preset;
  std::vector<double> gammas;
  app.add_option("command", cli.command, "indicial | kernel | solve | sweep | ucurve | expand | verify");
  app.add_option("check", cli.check, "verify target: bessel | covariance | asymptotics");
  app.add_option("--config", config_path, "JSON file with the same keys as the flags (underscored)");
  auto* o_n = app.add_option("--n", cli.n, "dimension (>= 4)");
  auto* o_alpha = app.add_option("--alpha", alpha, "U problem: alpha = gamma2 / (12 gamma3)");
  auto* o_preset = app.add_option("--preset", preset, "U problem preset: A, D2, P");
  auto* o_gammas = app.add_option("--gammas", gammas, "U problem: gamma1 gamma2 gamma3")->expected(3);
  auto* o_rmax = app.add_option("--r-max", r_max, "outer radius of the grid");
  auto* o_points = app.add_option("--points", cli.points, "grid points");
  auto* o_rin = app.add_option("--r-in", cli.r_in, "inner radius for problems posed on an end");
  auto* o_amp = app.add_option("--amplitude,--amplitudes", cli.amplitudes, "kernel amplitude(s)")->delimiter(',');
  auto* o_curv = app.add_option("--curvature", cli.curvature, "hyperbolic | constant:<v> | bump:<delta> | bump:auto");
  auto* o_nu = app.add_option("--nu", cli.nu, "deviation weight");
  auto* o_eps = app.add_option("--epsilon", cli.epsilon, "kernel amplitude bound");
  auto* o_tol = app.add_option("--tol", cli.tol, "fixed-point tolerance");
  auto* o_iter = app.add_option("--max-iter", cli.max_iter, "iteration limit");
  auto* o_pairs = app.add_option("--pairs", cli.pairs, "random pairs for verify covariance");
  auto* o_seed = app.add_option("--seed", cli.seed, "seed for verify covariance");
  auto* o_workers = app.add_option("--workers", cli.workers, "sweep worker threads (0: all cores)");
  auto* o_format = app.add_option("--format", cli.format, "json | csv");
  auto* o_out = app.add_option("--out", out_dir, "output directory (default $QCURVE_OUT or .)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  if (!config_path.empty()) apply_json(c, load_json_file(config_path));
  if (!cli.command.empty()) c.command = cli.command;
  if (!cli.check.empty()) c.check = cli.check;
  if (o_n->count()) c.n = cli.n;
  if (o_alpha->count()) c.alpha = alpha;
  if (o_preset->count()) c.preset = preset;
  if (o_gammas->count()) c.gammas = std::array<double, 3>{gammas[0], gammas[1], gammas[2]};
  if (o_rmax->count()) c.r_max = r_max;
  if (o_points->count()) c.points = cli.points;
  if (o_rin->count()) c.r_in = cli.r_in;
  if (o_amp->count()) c.amplitudes = cli.amplitudes;
  if (o_curv->count()) c.curvature = cli.curvature;
  if (o_nu->count()) c.nu = cli.nu;
  if (o_eps->count()) c.epsilon = cli.epsilon;
  if (o_tol->count()) c.tol = cli.tol;
  if (o_iter->count()) c.max_iter = cli.max_iter;
  if (o_pairs->count()) c.pairs = cli.pairs;
  if (o_seed->count()) c.seed = cli.seed;
  if (o_workers->count()) c.workers = cli.workers;
  if (o_format->count()) c.format = cli.format;
  if (o_out->count()) c.out_dir = out_dir;
  validate(c, o_n->count() > 0);
  return c;
}

Json config_json(const RunConfig& c) {
  auto opt = [](const auto& o) { return o ? Json(*o) : Json(nullptr); };
  return Json{{"command", c.command},
              {"check", c.check},
              {"n", c.u_case() ? 4 : c.n},
              {"alpha", opt(c.alpha)},
              {"preset", opt(c.preset)},
              {"gammas", opt(c.gammas)},
              {"r_max", c.grid_r_max()},
              {"points", c.points},
              {"r_in", c.r_in},
              {"amplitudes", c.amplitudes},
              {"curvature", c.curvature},
              {"nu", c.nu},
              {"epsilon", c.epsilon},
              {"tol", c.tol},
              {"max_iter", c.max_iter},
              {"pairs", c.pairs},
              {"seed", c.seed}};
}

int execute(const RunConfig& cfg, std::ostream& out) {
  Sink sink{cfg, out};
  const std::string& cmd = cfg.command;
  if (cmd == "indicial") return cmd_indicial(cfg, sink);
  if (cmd == "kernel") return cmd_kernel(cfg, sink);
  if (cmd == "solve") return cmd_solve(cfg, sink);
  if (cmd == "sweep") return cmd_sweep(cfg, sink);
  if (cmd == "ucurve") return cmd_ucurve(cfg, sink);
  if (cmd == "expand") return cmd_expand(cfg, sink);
  if (cfg.check == "bessel") return verify_bessel(cfg, sink);
  if (cfg.check == "covariance") return verify_covariance(cfg, sink);
  return verify_asymptotics(cfg, sink);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const Error& e) {
    err << "qcurve: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    return execute(cfg, out);
  } catch (const ConfigError& e) {
    err << "qcurve: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DegenerateOperatorError& e) {
    err << "qcurve: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "qcurve: " << e.what() << "\n";
    return kExitConfig;
  } catch (const WindowError& e) {
    err << "qcurve: " << e.what() << " (increase --r-max)\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "qcurve: " << e.what() << "\n";
    return kExitNotConverged;
  }
}

}  // namespace qcurv
