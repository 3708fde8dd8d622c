#pragma once

#include <string>
#include <utility>

#include "qcurv/nonlinear.hpp"

namespace qcurv {

// U = gamma1 |W|^2 + gamma2 Q - gamma3 Delta R in dimension 4.
enum class DetPreset { conformal_laplacian, spin_laplacian, paneitz, custom };

struct DetParams {
  real gamma1 = 0, gamma2 = 0, gamma3 = 1;
  DetPreset preset = DetPreset::custom;

  real alpha() const { return gamma2 / (12 * gamma3); }
  std::string tag() const;

  static DetParams make(DetPreset p);
  static DetParams custom(real g1, real g2, real g3);
  // "A", "D2", "P"
  static DetParams from_name(const std::string& name);
};

// 3 gamma2 on the hyperbolic model (W = 0, Delta R = 0, Q = 3)
real u_curvature_hyperbolic(const DetParams& p);

// Radial contractions on H^4 for w = w(r), with c = coth r:
//   |grad w|^2 = w'^2, |Hess w|^2 = w''^2 + 3 c^2 w'^2, Ric(grad w, grad w) = -3 w'^2,
//   Hess w(grad w, grad w) = w'' w'^2.
struct RadialContractions {
  std::vector<real> grad_sq, hess_sq, lap, ric_grad, hess_grad;
};
RadialContractions radial_contractions(const RadialFunction& w);

// Right-hand side T of L w = T(w), L = ((1+a)Delta + 6a)(Delta - 4):
//   T = U~/(6 g3)(e^{4w}-1-4w) + (U~ - U)/(6 g3)(1 + 4w) - N(w)
// with N the gradient nonlinearities of the normalized equation.
RadialFunction u_nonlinear_rhs(const RadialFunction& w, const DetParams& p, real target_U);

// L w through the factored discrete operator.
RadialFunction u_linearized_apply(const RadialFunction& w, const DetParams& p);

// U of e^{2w} g from the conformal change law in divergence form (independent
// of the radial contractions above).
RadialFunction u_curvature_of(const RadialFunction& w, const DetParams& p);
// (U(e^{2w} g) - target) e^{4w} / (6 gamma3); its derivative at w = 0 is L
RadialFunction u_equation_map(const RadialFunction& w, const DetParams& p, real target_U);

// Grid for the U problem: the whole ball, or the end [r_in, r_max] when the
// (1+a)Delta + 6a factor has no decaying radial kernel.
GridPtr u_grid(const DetParams& p, real r_max, std::size_t points, real r_in = 1);
Machinery u_machinery(const DetParams& p, real r_max, std::size_t points, real r_in = 1);

SolveResult u_fixed_point_solve(real amplitude, const DetParams& p, const IterationConfig& cfg, const Machinery& m,
                                real target_U);
SolveResult u_fixed_point_solve(real amplitude, const DetParams& p, const IterationConfig& cfg, const Machinery& m);

// (U/(12 gamma3), -2 sigma_2(g)) on the hyperbolic model; requires alpha = -1, gamma1 = 0
std::pair<real, real> sigma2_identity_check(const DetParams& p);

}  // namespace qcurv
