#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcurv/edge_linear.hpp"
#include "qcurv/expansion.hpp"
#include "qcurv/geometry.hpp"

namespace qcurv {

struct TargetCurvature {
  RadialFunction f;
  real nu = 0;              // deviation weight
  real deviation_norm = 0;  // sup x^{-nu} |f - Q_g|
  bool decay_ok = true;     // f - Q_g measured to decay like x^nu

  // f = Q_g
  static TargetCurvature hyperbolic(Dimension dim, GridPtr grid, real nu = -1);
  // f = Q_g + delta
  static TargetCurvature constant(Dimension dim, GridPtr grid, real value, real nu = -1);
  static TargetCurvature profile(Dimension dim, RadialFunction f, real nu = -1);
  // f = Q_g + delta sech^2(r), even at the origin and ~ 4 delta x^2 at the boundary
  static TargetCurvature bump(Dimension dim, GridPtr grid, real delta, real nu = -1);
};

// nu must lie in ((n-1)/4, (n-1)/2); a negative value selects 0.4 (n-1).
real admissible_weight(Dimension dim, real nu);

struct IterationConfig {
  real epsilon = 1e-3L;
  real tol = 1e-10L;
  int max_iter = 50;
};

// Measured constants behind the advisory smallness conditions.
struct SmallnessCheck {
  real g_norm = 0;           // sup-norm estimate of G on probe functions
  real quad_constant = 0;    // |T(u)| <= quad_constant |u|^2 for f = Q_g
  real radius = 0;           // 2 |amplitude| sup|k|
  real contraction_bound = 0;  // 2 g_norm quad_constant radius
  real target_bound = 0;     // g_norm sup|T(0)|
  bool satisfied = true;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  std::vector<real> increments;  // sup|u2^{k+1} - u2^k|
  std::vector<real> ratios;      // successive increment ratios
  real residual = 0;             // sup |E(u)| on the interior window
  real amplitude = 0;
  real p1_amplitude = 0;
  bool p1_consistent = false;
  real correction_norm = 0;      // sup|u2|
  std::optional<ExpansionFit> expansion;
  SmallnessCheck smallness;
  bool log_terms_possible = false;
  std::string failure;           // empty on success
  std::vector<std::string> warnings;
};

struct SolveResult {
  SolveReport report;
  RadialFunction u;
};

// e^z - 1 - z and (1+u)^p - 1 - p u without cancellation
real exp_remainder(real z);
real binomial_remainder(real u, real p);

// T(u1 + u2): the right-hand side of L u = T(u)
RadialFunction nonlinear_rhs(const RadialFunction& u, const TargetCurvature& f, Dimension dim);
RadialFunction nonlinear_rhs(const KernelElement& u1, const RadialFunction& u2, const TargetCurvature& f,
                             Dimension dim);

// sup of |E(u)| over r in [r_min, r_max - 1]
real e_residual(const RadialFunction& u, const TargetCurvature& f, Dimension dim);
RadialFunction e_map(const RadialFunction& u, const TargetCurvature& f, Dimension dim);
Window interior_window(const RadialGrid& g);

// sup|G phi| / sup|phi| over probes decaying faster than the kernel
real measured_g_norm(const Machinery& m);
SmallnessCheck measure_smallness(const Machinery& m, const TargetCurvature& f, Dimension dim, real amplitude);
// Largest bump delta meeting the measured closeness condition g_norm sup|T(0)| <= radius / 2.
real bump_closeness_bound(const Machinery& m, Dimension dim, real amplitude);

// u1 = amplitude k; u2 <- G(T(u1 + u2)) until the sup increment drops below tol.
// Fills the iteration trace and the P1 check; the caller adds residuals.
SolveResult contraction_iterate(real amplitude, const std::function<RadialFunction(const RadialFunction&)>& T,
                                const IterationConfig& cfg, const Machinery& m,
                                const RadialFunction* u2_start = nullptr);

SolveResult fixed_point_solve(real amplitude, const TargetCurvature& f, const IterationConfig& cfg,
                              const Machinery& m, const RadialFunction* u2_start = nullptr);

struct SweepResult {
  std::vector<SolveReport> reports;
  std::vector<std::optional<RadialFunction>> solutions;
  std::vector<std::vector<real>> distances;  // pairwise sup distances, NaN where a solve failed
};

SweepResult sweep_family(const std::vector<real>& amplitudes, const TargetCurvature& f, const IterationConfig& cfg,
                         const Machinery& m, unsigned workers = 0);

}  // namespace qcurv
