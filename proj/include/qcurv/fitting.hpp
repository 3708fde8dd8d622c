#pragma once

#include <vector>

#include "qcurv/grid.hpp"

namespace qcurv {

// Leading boundary behaviour of a radial solution in x = e^{-r}.
//   oscillatory: x^p (a cos(beta ln x) + b sin(beta ln x)) with x^{p+2}, x^{p+4} corrections
//   powers:      sum_k c_k x^{powers[k]}; the first power is the leading one
struct LeadingForm {
  bool oscillatory = true;
  real p = 0;
  real beta = 0;
  std::vector<real> powers;

  static LeadingForm oscillating(real p, real beta) { return {true, p, beta, {}}; }
  static LeadingForm real_powers(std::vector<real> powers) { return {false, powers.front(), 0, powers}; }

  std::size_t basis_size() const { return oscillatory ? 6 : powers.size(); }
  // coefficients that P1 matches: (a, b) or the leading power only
  std::size_t leading_count() const { return oscillatory ? 2 : 1; }
  // basis value divided by x^p (row weighting)
  real basis_weighted(std::size_t k, real x) const;
  real basis(std::size_t k, real x) const;
};

struct LinearFit {
  std::vector<real> coef;
  real residual = 0;  // RMS of the weighted residual
  real condition = 0;
  std::size_t lo = 0, hi = 0;  // grid index range used
};

// Weighted least squares of u against the form on the window, rows scaled by x^{-p}.
LinearFit fit_form(const RadialFunction& u, const LeadingForm& form, Window w);
// sum_k coef_k basis_k on the grid; leading_only restricts to the P1 coefficients
RadialFunction evaluate_form(const GridPtr& grid, const LeadingForm& form, const std::vector<real>& coef,
                             bool leading_only = false);

// Free fit of exponent and frequency for data y(x) ~ x^p (a cos(beta ln x) + b sin(beta ln x)) + O(x^{p+2}),
// with x in (0,1]. Returns fitted p, beta and the linear coefficients.
struct OscillationFit {
  double p = 0;
  double beta = 0;
  double a = 0, b = 0;
  double residual = 0;
};
OscillationFit fit_exponent_frequency(const std::vector<real>& x, const std::vector<real>& y);

// Initial estimates: frequency from zero crossings in ln x, exponent from local maxima of |y|.
OscillationFit estimate_oscillation(const std::vector<real>& x, const std::vector<real>& y);

// Exponent q in |y| ~ x^q from a least-squares line through log|y| against ln x.
double power_exponent(const std::vector<real>& x, const std::vector<real>& y);

// Exponent from block maxima of |y| (robust for oscillating data).
double envelope_exponent(const std::vector<real>& x, const std::vector<real>& y, int blocks = 8);

}  // namespace qcurv
