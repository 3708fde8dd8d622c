#pragma once

#include <string>

#include "qcurv/grid.hpp"

namespace qcurv {

// Constants of the hyperbolic model H^n with g = dr^2 + sinh^2(r) g_S.
struct CurvatureConstants {
  int n;
  real R_hyp;      // -n(n-1)
  real Q_hyp;      // n(n^2-4)/8
  real ric_sq;     // |Ric|^2 = n(n-1)^2
  real a_n, b_n;   // Paneitz coefficients
  real c_lap;      // P = Delta^2 + c_lap Delta + (n-4)/2 Q
  real weyl_sq;    // 0 on the model
};

CurvatureConstants hyperbolic_curvature_report(Dimension dim);

enum class Regime { exp, power };

// g~ = e^{2u} g for n = 4, g~ = (1+u)^{4/(n-4)} g for n >= 5.
struct ConformalFactor {
  Regime regime;
  RadialFunction u;
  static ConformalFactor for_dimension(Dimension dim, RadialFunction u);
};

// coth(r) * f'(r) with its regular value f''(0) at the origin
real coth_times(real r, real d1, real d2);

RadialFunction laplacian_radial(const RadialFunction& f, Dimension dim);
RadialFunction laplacian_from_jet(const Jet& j, const GridPtr& grid, Dimension dim);
RadialFunction bilaplacian_radial(const RadialFunction& f, Dimension dim);
RadialFunction paneitz_apply(const RadialFunction& phi, Dimension dim);

// log conformal factor w with g~ = e^{2w} g
RadialFunction log_factor(const ConformalFactor& cf, Dimension dim);

RadialFunction q_of_conformal(const ConformalFactor& cf, Dimension dim);
RadialFunction scalar_of_conformal(const ConformalFactor& cf, Dimension dim);
// R~ - R evaluated without the cancellation of forming R~ first
RadialFunction scalar_deviation(const ConformalFactor& cf, Dimension dim);

// Independent route through the curvature of g~ = e^{2w} g: Ricci, scalar
// curvature and Q of g~ from the standard conformal change formulas, then the
// Paneitz operator of g~ assembled from its definition. Origin values are
// filled by even extrapolation from r = h, 2h, 3h.
RadialFunction q_from_metric(const RadialFunction& w, Dimension dim);
RadialFunction paneitz_of_metric(const RadialFunction& w, const RadialFunction& phi, Dimension dim);

// Defect of conformal covariance, zero up to discretization error:
//   n = 4:  P_{g~} phi - e^{-4u} P_g phi
//   n >= 5: P_{g~} phi - (1+u)^{-(n+4)/(n-4)} P_g((1+u) phi)
// with P_{g~} from paneitz_of_metric.
RadialFunction covariance_defect(const ConformalFactor& cf, const RadialFunction& phi, Dimension dim);

}  // namespace qcurv
