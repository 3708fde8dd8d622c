#include "qcurv/nonlinear.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace qcurv {

real admissible_weight(Dimension dim, real nu) {
  const real m = dim.n - 1;
  if (nu < 0) return 0.4L * m;
  if (!(nu > m / 4 && nu < m / 2)) throw PreconditionError("deviation weight nu must lie in ((n-1)/4, (n-1)/2)");
  return nu;
}

TargetCurvature TargetCurvature::profile(Dimension dim, RadialFunction f, real nu) {
  const real q = hyperbolic_curvature_report(dim).Q_hyp;
  TargetCurvature t{f, admissible_weight(dim, nu), 0, true};
  RadialFunction dev = f.map([q](real v) { return v - q; });
  t.deviation_norm = weighted_norm(dev, t.nu, 0);
  t.decay_ok = std::isfinite(t.deviation_norm);
  return t;
}

TargetCurvature TargetCurvature::constant(Dimension dim, GridPtr grid, real value, real nu) {
  return profile(dim, RadialFunction::constant(std::move(grid), value), nu);
}

TargetCurvature TargetCurvature::hyperbolic(Dimension dim, GridPtr grid, real nu) {
  return constant(dim, std::move(grid), hyperbolic_curvature_report(dim).Q_hyp, nu);
}

TargetCurvature TargetCurvature::bump(Dimension dim, GridPtr grid, real delta, real nu) {
  const real q = hyperbolic_curvature_report(dim).Q_hyp;
  auto f = RadialFunction::sample(std::move(grid), [&](real r) {
    real s = 1 / std::cosh(r);
    return q + delta * s * s;
  });
  return profile(dim, std::move(f), nu);
}

real exp_remainder(real z) {
  if (std::fabs(z) > 0.5L) return std::expm1(z) - z;
  real term = z * z / 2, sum = 0;
  for (int k = 3; k < 60 && std::fabs(term) > 1e-22L * std::fabs(sum); ++k) {
    sum += term;
    term *= z / k;
  }
  return sum;
}

real binomial_remainder(real u, real p) {
  if (!(1 + u > 0)) throw DomainError("conformal factor not positive");
  if (std::fabs(u) > 0.5L) return std::expm1(p * std::log1p(u)) - p * u;
  real term = p * (p - 1) / 2 * u * u, sum = 0;
  for (int k = 3; k < 200 && std::fabs(term) > 1e-22L * std::fabs(sum); ++k) {
    sum += term;
    term *= (p - k + 1) / k * u;
  }
  return sum;
}

RadialFunction nonlinear_rhs(const RadialFunction& u, const TargetCurvature& t, Dimension dim) {
  const real Q = hyperbolic_curvature_report(dim).Q_hyp;
  const auto& g = *u.grid();
  std::vector<real> out(u.size());
  if (dim.n == 4) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      real f = t.f[i], d = f - Q;
      out[i] = 2 * exp_remainder(4 * u[i]) * f + 2 * d + 8 * d * u[i];
    }
  } else {
    const real n = dim.n, p = (n + 4) / (n - 4);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!(1 + u[i] > 0))
        throw DomainError("conformal factor not positive at r = " + std::to_string(static_cast<double>(g.r(i))));
      real f = t.f[i], d = f - Q;
      out[i] = (n - 4) / 2 * binomial_remainder(u[i], p) * f + (n - 4) / 2 * d + (n + 4) / 2 * d * u[i];
    }
  }
  return RadialFunction(u.grid(), std::move(out));
}

RadialFunction nonlinear_rhs(const KernelElement& u1, const RadialFunction& u2, const TargetCurvature& f,
                             Dimension dim) {
  return nonlinear_rhs(u1.profile + u2, f, dim);
}

RadialFunction e_map(const RadialFunction& u, const TargetCurvature& t, Dimension dim) {
  const real Q = hyperbolic_curvature_report(dim).Q_hyp;
  RadialFunction pu = paneitz_apply(u, dim);
  std::vector<real> out(u.size());
  if (dim.n == 4) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = pu[i] + 2 * Q - 2 * t.f[i] * std::exp(4 * u[i]);
  } else {
    const real n = dim.n, p = (n + 4) / (n - 4);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!(1 + u[i] > 0)) throw DomainError("conformal factor not positive");
      // P(1+u) = P u + (n-4)/2 Q
      out[i] = pu[i] + (n - 4) / 2 * Q - (n - 4) / 2 * t.f[i] * std::pow(1 + u[i], p);
    }
  }
  return RadialFunction(u.grid(), std::move(out));
}

Window interior_window(const RadialGrid& g) { return {g.r_min() + (g.has_origin() ? 0 : 0.5L), g.r_max() - 1}; }

real e_residual(const RadialFunction& u, const TargetCurvature& f, Dimension dim) {
  return e_map(u, f, dim).sup_norm(interior_window(*u.grid()));
}

namespace {

// probes for the operator norm of G, decaying faster than the kernel like
// the nonlinear terms do
std::vector<RadialFunction> g_probes(const GridPtr& grid, real p) {
  std::vector<RadialFunction> out;
  for (real a : {p + 1, p + 2})
    out.push_back(RadialFunction::sample(grid, [a](real r) { return std::pow(1 / std::cosh(r), a); }));
  out.push_back(RadialFunction::sample(grid, [p](real r) { return std::cos(2 * r) * std::pow(1 / std::cosh(r), p + 1); }));
  return out;
}

}  // namespace

real measured_g_norm(const Machinery& m) {
  real g = 0;
  for (const auto& pr : g_probes(m.op.grid(), m.op.kernel_form().p)) g = std::max(g, m.G(pr).sup_norm() / pr.sup_norm());
  return g;
}

SmallnessCheck measure_smallness(const Machinery& m, const TargetCurvature& f, Dimension dim, real amplitude) {
  SmallnessCheck s;
  s.g_norm = measured_g_norm(m);
  real fmax = f.f.sup_norm();
  const real n = dim.n;
  if (dim.n == 4) {
    s.quad_constant = 16 * fmax;
  } else {
    real p = (n + 4) / (n - 4);
    s.quad_constant = (n - 4) / 2 * p * (p - 1) / 2 * fmax;
  }
  s.radius = 2 * std::fabs(amplitude) * m.kernel.khat->sup_norm();
  s.contraction_bound = 2 * s.g_norm * s.quad_constant * s.radius;
  RadialFunction t0 = nonlinear_rhs(RadialFunction::constant(m.op.grid(), 0), f, dim);
  s.target_bound = s.g_norm * t0.sup_norm();
  s.satisfied = s.contraction_bound <= 0.5L && s.target_bound <= 0.5L * s.radius;
  return s;
}

real bump_closeness_bound(const Machinery& m, Dimension dim, real amplitude) {
  // T(0) = c0 delta sech^2 for the bump target
  const real c0 = dim.n == 4 ? 2 : (dim.n - 4) / 2.0L;
  const real radius = 2 * std::fabs(amplitude) * m.kernel.khat->sup_norm();
  return radius / (2 * measured_g_norm(m) * c0);
}

SolveResult contraction_iterate(real amplitude, const std::function<RadialFunction(const RadialFunction&)>& T,
                                const IterationConfig& cfg, const Machinery& m, const RadialFunction* u2_start) {
  SolveReport rep;
  rep.amplitude = amplitude;
  if (!(cfg.epsilon > 0) || !(cfg.tol > 0) || cfg.max_iter < 1)
    throw PreconditionError("epsilon, tol and max_iter must be positive");
  if (std::fabs(amplitude) > cfg.epsilon) rep.warnings.push_back("amplitude exceeds epsilon");
  RadialFunction u1 = *m.kernel.khat * amplitude;
  RadialFunction u2 = u2_start ? *u2_start : RadialFunction::constant(m.op.grid(), 0);
  try {
    for (int k = 0; k < cfg.max_iter; ++k) {
      RadialFunction next = m.G(T(u1 + u2));
      real inc = (next - u2).sup_norm();
      if (!rep.increments.empty()) rep.ratios.push_back(inc / rep.increments.back());
      rep.increments.push_back(inc);
      u2 = std::move(next);
      rep.iterations = k + 1;
      if (!std::isfinite(inc) || inc > 1) {
        rep.failure = "iteration left the contraction regime";
        break;
      }
      if (inc < cfg.tol) {
        rep.converged = true;
        break;
      }
    }
    if (!rep.converged && rep.failure.empty()) rep.failure = "no convergence within max_iter";
  } catch (const DomainError& e) {
    rep.failure = std::string("domain: ") + e.what();
  }
  RadialFunction u = u1 + u2;
  rep.correction_norm = u2.sup_norm();
  if (rep.failure.empty() || rep.converged) {
    rep.p1_amplitude = m.proj.amplitude(u);
    rep.p1_consistent = std::fabs(rep.p1_amplitude - amplitude) <= 1e-6L * std::fabs(amplitude) + 1e-10L;
  }
  return {std::move(rep), std::move(u)};
}

SolveResult fixed_point_solve(real amplitude, const TargetCurvature& f, const IterationConfig& cfg,
                              const Machinery& m, const RadialFunction* u2_start) {
  Dimension dim(m.op.n());
  if (f.f.size() != m.op.grid()->size()) throw PreconditionError("target curvature sampled on a different grid");
  auto T = [&](const RadialFunction& u) { return nonlinear_rhs(u, f, dim); };
  SolveResult res = contraction_iterate(amplitude, T, cfg, m, u2_start);
  auto& rep = res.report;
  rep.log_terms_possible = m.op.spectrum().log_terms_possible;
  if (!f.decay_ok) rep.warnings.push_back("target deviation does not decay like x^nu");
  rep.smallness = measure_smallness(m, f, dim, amplitude);
  if (!rep.smallness.satisfied) rep.warnings.push_back("measured smallness conditions not met");
  if (rep.converged) {
    rep.residual = e_residual(res.u, f, dim);
    try {
      rep.expansion = fit_leading(res.u, dim, default_fit_window(m.op));
    } catch (const Error& e) {
      rep.warnings.push_back(std::string("expansion fit: ") + e.what());
    }
  }
  return res;
}

SweepResult sweep_family(const std::vector<real>& amplitudes, const TargetCurvature& f, const IterationConfig& cfg,
                         const Machinery& m, unsigned workers) {
  const std::size_t K = amplitudes.size();
  SweepResult out;
  out.reports.resize(K);
  out.solutions.resize(K);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(K, 1)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < K;) {
      try {
        SolveResult r = fixed_point_solve(amplitudes[i], f, cfg, m);
        out.reports[i] = std::move(r.report);
        if (out.reports[i].converged) out.solutions[i] = std::move(r.u);
      } catch (const std::exception& e) {
        out.reports[i].amplitude = amplitudes[i];
        out.reports[i].failure = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  out.distances.assign(K, std::vector<real>(K, std::nan("")));
  for (std::size_t a = 0; a < K; ++a)
    for (std::size_t b = 0; b < K; ++b)
      if (out.solutions[a] && out.solutions[b]) out.distances[a][b] = (*out.solutions[a] - *out.solutions[b]).sup_norm();
  return out;
}

}  // namespace qcurv
