#pragma once

#include <memory>
#include <vector>

#include "qcurv/banded.hpp"
#include "qcurv/fitting.hpp"
#include "qcurv/grid.hpp"
#include "qcurv/indicial.hpp"

namespace qcurv {

// scale * (Delta + shift)
struct Factor {
  real scale;
  real shift;
  // roots of zeta^2 - (n-1) zeta + shift
  std::pair<cplx, cplx> roots(int n) const;
};

enum class KernelMode {
  regular,          // kernel of the second factor, regular at the origin
  decaying_branch,  // exterior end: decaying solution of the second factor
};

class FactoredOperator {
 public:
  // L = (Delta - n)(Delta + (n^2-4)/2)
  static FactoredOperator assemble_q(Dimension dim, GridPtr grid);
  // L = ((1+alpha)Delta + 6 alpha)(Delta - 4), n = 4
  static FactoredOperator assemble_u(double alpha, GridPtr grid);

  int n() const { return n_; }
  const GridPtr& grid() const { return grid_; }
  // solved first, with a Robin row selecting its decaying root
  const Factor& first() const { return first_; }
  // carries the kernel
  const Factor& second() const { return second_; }
  KernelMode mode() const { return mode_; }
  const BoundarySpectrum& spectrum() const { return spec_; }
  const BandedMatrix& laplacian() const { return lap_; }

  RadialFunction apply_laplacian(const RadialFunction& u) const;
  RadialFunction apply_factor(const Factor& f, const RadialFunction& u) const;
  RadialFunction apply_L(const RadialFunction& u) const;

  // Leading boundary form of kernel elements.
  LeadingForm kernel_form() const { return form_; }
  // decaying root used by the Robin row of a factor
  real decay_root(const Factor& f) const;

  // origin parity or Dirichlet at an inner end, plus the given outer row
  BandedMatrix factor_matrix(const Factor& f) const;

 private:
  FactoredOperator(int n, GridPtr grid, Factor first, Factor second, KernelMode mode, BoundarySpectrum spec);
  int n_;
  GridPtr grid_;
  Factor first_, second_;
  KernelMode mode_;
  BoundarySpectrum spec_;
  LeadingForm form_;
  BandedMatrix lap_;
};

// Regular solution of (Delta + shift) k = 0 with k(0) = 1: Frobenius series
// near the origin, fixed-step RK78 beyond.
RadialFunction shoot_regular(const GridPtr& grid, int n, real shift);
// Solution of (Delta + shift) k = 0 behaving like x^zeta (1 + O(x^2)) at r_max, integrated inward.
RadialFunction shoot_decaying(const GridPtr& grid, int n, real shift, real zeta);

struct ProjectionP1 {
  LeadingForm form;
  Window window;
  std::shared_ptr<const RadialFunction> khat;
  std::vector<real> kcoef;  // leading coefficients of khat

  // coefficient c with P1 u = c khat
  real amplitude(const RadialFunction& u) const;
  RadialFunction apply(const RadialFunction& u) const;
};

struct KernelElement {
  RadialFunction profile;  // amplitude * khat
  real amplitude = 0;
  std::shared_ptr<const RadialFunction> khat;
  std::vector<real> leading_fit;  // fitted coefficients of khat on the window
  OscillationFit free_fit;        // exponent/frequency fitted without constraints
  double envelope_exponent = 0;
  bool regular_at_origin = true;
};

Window default_fit_window(const FactoredOperator& op);

KernelElement kernel_element(const FactoredOperator& op, real amplitude);
ProjectionP1 make_projection(const KernelElement& k, const FactoredOperator& op);

struct FactorSolve {
  RadialFunction v;
  real boundary_residual;  // |f(r_max)| / sup|f|; the homogeneous Robin row is exact only when this is small
};

FactorSolve solve_T1(const FactoredOperator& op, const RadialFunction& f);
RadialFunction solve_T2(const FactoredOperator& op, const RadialFunction& v, const KernelElement& k);
RadialFunction generalized_inverse(const FactoredOperator& op, const RadialFunction& f, const KernelElement& k,
                                   const ProjectionP1& proj);

// Operator, unit kernel element and projection bundled for the solvers.
struct Machinery {
  FactoredOperator op;
  KernelElement kernel;  // amplitude 1
  ProjectionP1 proj;

  static Machinery build(FactoredOperator op);
  RadialFunction G(const RadialFunction& f) const { return generalized_inverse(op, f, kernel, proj); }
};

}  // namespace qcurv
