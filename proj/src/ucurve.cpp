#include "qcurv/ucurve.hpp"

#include <cmath>

namespace qcurv {

std::string DetParams::tag() const {
  switch (preset) {
    case DetPreset::conformal_laplacian: return "conformal_laplacian";
    case DetPreset::spin_laplacian: return "spin_laplacian";
    case DetPreset::paneitz: return "paneitz";
    case DetPreset::custom: break;
  }
  return "custom";
}

DetParams DetParams::make(DetPreset p) {
  switch (p) {
    case DetPreset::conformal_laplacian: return {1, -4, -2.0L / 3, p};
    case DetPreset::spin_laplacian: return {7, -88, -14.0L / 3, p};
    case DetPreset::paneitz: return {-0.25L, -14, 8.0L / 3, p};
    case DetPreset::custom: break;
  }
  throw ConfigError("custom parameters need explicit gammas");
}

DetParams DetParams::custom(real g1, real g2, real g3) {
  if (g3 == 0) throw ConfigError("gamma3 must be nonzero");
  return {g1, g2, g3, DetPreset::custom};
}

DetParams DetParams::from_name(const std::string& name) {
  if (name == "A") return make(DetPreset::conformal_laplacian);
  if (name == "D2") return make(DetPreset::spin_laplacian);
  if (name == "P") return make(DetPreset::paneitz);
  throw ConfigError("unknown preset '" + name + "' (expected A, D2 or P)");
}

real u_curvature_hyperbolic(const DetParams& p) { return 3 * p.gamma2; }

RadialContractions radial_contractions(const RadialFunction& w) {
  const auto& g = *w.grid();
  Jet j = differentiate(w, 2);
  const std::size_t N = w.size();
  RadialContractions c;
  c.grad_sq.resize(N);
  c.hess_sq.resize(N);
  c.lap.resize(N);
  c.ric_grad.resize(N);
  c.hess_grad.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    real w1 = j[1][i], w2 = j[2][i];
    real cw = coth_times(g.r(i), w1, w2);  // coth(r) w', equal to w''(0) at the origin
    c.grad_sq[i] = w1 * w1;
    c.hess_sq[i] = w2 * w2 + 3 * cw * cw;
    c.lap[i] = w2 + 3 * cw;
    c.ric_grad[i] = -3 * w1 * w1;
    c.hess_grad[i] = w2 * w1 * w1;
  }
  return c;
}

namespace {

void check_alpha(const DetParams& p) {
  if (p.gamma3 == 0) throw ConfigError("gamma3 must be nonzero");
  if (std::fabs(p.alpha() + 1) < 1e-12L)
    throw DegenerateOperatorError("alpha = -1: the U-equation is second order (sigma_2 case)");
}

}  // namespace

RadialFunction u_nonlinear_rhs(const RadialFunction& w, const DetParams& p, real target_U) {
  check_alpha(p);
  const real U = u_curvature_hyperbolic(p), s = 6 * p.gamma3;
  RadialContractions c = radial_contractions(w);
  std::vector<real> out(w.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    // N = 2 Ric(dw,dw) + 2(|Hess w|^2 - (Delta w)^2) - 4 Hess w(dw,dw) - 2|dw|^2 Delta w
    real N = 2 * c.ric_grad[i] + 2 * (c.hess_sq[i] - c.lap[i] * c.lap[i]) - 4 * c.hess_grad[i] -
             2 * c.grad_sq[i] * c.lap[i];
    out[i] = target_U / s * exp_remainder(4 * w[i]) + (target_U - U) / s * (1 + 4 * w[i]) - N;
  }
  return RadialFunction(w.grid(), std::move(out));
}

RadialFunction u_linearized_apply(const RadialFunction& w, const DetParams& p) {
  check_alpha(p);
  const real a = p.alpha();
  const auto& grid = w.grid();
  if (6 * a / (1 + a) > 0 || !grid->has_origin()) return FactoredOperator::assemble_u(static_cast<double>(a), grid).apply_L(w);
  // the factored operator for this alpha lives on an end; on the ball use the expanded form
  Dimension d4(4);
  return (1 + a) * bilaplacian_radial(w, d4) + (2 * a - 4) * laplacian_radial(w, d4) + (-24 * a) * w;
}

RadialFunction u_curvature_of(const RadialFunction& w, const DetParams& p) {
  const auto& g = *w.grid();
  const Dimension d4(4);
  const real g2 = p.gamma2, g3 = p.gamma3, U = u_curvature_hyperbolic(p);
  RadialFunction lap = laplacian_radial(w, d4);
  RadialFunction bilap = bilaplacian_radial(w, d4);
  std::vector<real> w1 = derivative(w, 1);
  RadialFunction grad_sq(w.grid(), [&] {
    std::vector<real> v(w1.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w1[i] * w1[i];
    return v;
  }());
  RadialFunction lap_grad_sq = laplacian_radial(grad_sq, d4);
  // div((Delta w + |dw|^2) dw) = G' + 3 coth(r) G with G = (Delta w + |dw|^2) w'
  std::vector<real> G(w.size());
  for (std::size_t i = 0; i < G.size(); ++i) G[i] = (lap[i] + grad_sq[i]) * w1[i];
  RadialFunction Gf(w.grid(), G);
  std::vector<real> G1 = derivative(Gf, 1, Parity::odd);
  const real R = -12;
  std::vector<real> out(w.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    real div = G1[i] + 3 * coth_times(g.r(i), G[i], G1[i]);
    real ric_hess = -3 * lap[i];  // Ric_ij Hess^ij w with Ric = -3g
    real rhs = U + (g2 / 2 + 6 * g3) * bilap[i] + 6 * g3 * lap_grad_sq[i] - 12 * g3 * div + g2 * ric_hess +
               (2 * g3 - g2 / 3) * R * lap[i];
    out[i] = std::exp(-4 * w[i]) * rhs;
  }
  return RadialFunction(w.grid(), std::move(out));
}

RadialFunction u_equation_map(const RadialFunction& w, const DetParams& p, real target_U) {
  RadialFunction u = u_curvature_of(w, p);
  std::vector<real> out(w.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (u[i] - target_U) * std::exp(4 * w[i]) / (6 * p.gamma3);
  return RadialFunction(w.grid(), std::move(out));
}

GridPtr u_grid(const DetParams& p, real r_max, std::size_t points, real r_in) {
  check_alpha(p);
  const real a = p.alpha();
  return RadialGrid::uniform(r_max, points, 6 * a / (1 + a) > 0 ? 0 : r_in);
}

Machinery u_machinery(const DetParams& p, real r_max, std::size_t points, real r_in) {
  return Machinery::build(FactoredOperator::assemble_u(static_cast<double>(p.alpha()), u_grid(p, r_max, points, r_in)));
}

SolveResult u_fixed_point_solve(real amplitude, const DetParams& p, const IterationConfig& cfg, const Machinery& m,
                                real target_U) {
  check_alpha(p);
  auto T = [&](const RadialFunction& w) { return u_nonlinear_rhs(w, p, target_U); };
  SolveResult res = contraction_iterate(amplitude, T, cfg, m);
  auto& rep = res.report;
  rep.log_terms_possible = m.op.spectrum().log_terms_possible;
  if (rep.converged) {
    RadialFunction u = u_curvature_of(res.u, p);
    rep.residual = (u - RadialFunction::constant(u.grid(), target_U)).sup_norm(interior_window(*u.grid()));
    try {
      rep.expansion = fit_leading(res.u, m.op.kernel_form(), default_fit_window(m.op), rep.log_terms_possible);
    } catch (const Error& e) {
      rep.warnings.push_back(std::string("expansion fit: ") + e.what());
    }
  }
  return res;
}

SolveResult u_fixed_point_solve(real amplitude, const DetParams& p, const IterationConfig& cfg, const Machinery& m) {
  return u_fixed_point_solve(amplitude, p, cfg, m, u_curvature_hyperbolic(p));
}

std::pair<real, real> sigma2_identity_check(const DetParams& p) {
  if (p.gamma1 != 0) throw PreconditionError("sigma_2 identity requires gamma1 = 0");
  if (p.gamma3 == 0 || std::fabs(p.alpha() + 1) > 1e-12L) throw PreconditionError("sigma_2 identity requires alpha = -1");
  // Schouten tensor of H^4: A = (Ric - R/(2(n-1)) g)/(n-2) = -g/2
  const real n = 4, a = (-(n - 1) - (-n * (n - 1)) / (2 * (n - 1))) / (n - 2);
  const real trA = n * a, normA = n * a * a;
  const real sigma2 = (trA * trA - normA) / 2;
  return {u_curvature_hyperbolic(p) / (12 * p.gamma3), -2 * sigma2};
}

}  // namespace qcurv
