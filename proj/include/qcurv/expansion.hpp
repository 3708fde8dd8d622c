#pragma once

#include <complex>
#include <limits>

#include "qcurv/fitting.hpp"
#include "qcurv/grid.hpp"

namespace qcurv {

struct ExpansionFit {
  real leading_exponent = 0;
  real frequency = 0;  // 0 for real-power forms
  real a = 0, b = 0;   // u ~ x^p (a cos(beta ln x) + b sin(beta ln x))
  std::complex<real> u00() const { return {a / 2, -b / 2}; }  // u = u00 x^{p+i beta} + conj
  real x_lo = 0, x_hi = 0;
  real residual = 0;
  real remainder_exponent = 0;
  bool log_terms_flag = false;
  std::vector<real> coefficients;  // all basis coefficients of the fitted form
};

// Fit of the Q-family leading form x^{(n-1)/2}(a cos + b sin)(beta ln x) with
// x^2, x^4 corrections. The window must hold at least three periods in ln x.
ExpansionFit fit_leading(const RadialFunction& u, Dimension dim, Window w);
ExpansionFit fit_leading(const RadialFunction& u, const LeadingForm& form, Window w, bool log_terms_flag = false);

// Surrogate of the weighted norm: sup_j sup |x^{-nu} (x d/dx)^j u| for j <= order.
// Returns +infinity when the running sup keeps growing toward the boundary.
inline constexpr real kDivergent = std::numeric_limits<real>::infinity();
real weighted_norm(const RadialFunction& u, real nu, int order = 0);

// Coefficient c in R~ - R ~ c u near the boundary, from scalar least squares on
// one-period windows approaching r_max and Aitken extrapolation of the sequence.
struct ScalarAsymptotics {
  real coefficient = 0;
  std::vector<real> window_values;  // ordered toward the boundary
  std::vector<real> window_mid;     // r midpoints
};
ScalarAsymptotics scalar_asymptotics(const RadialFunction& u, Dimension dim);
real scalar_asymptotic_coefficient(const RadialFunction& u, Dimension dim);

// Exponent q of |u| ~ x^q on a window, from block maxima of |u|.
real remainder_exponent(const RadialFunction& u, Window w);

}  // namespace qcurv
