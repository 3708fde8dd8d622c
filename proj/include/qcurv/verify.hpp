#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcurv/bessel.hpp"
#include "qcurv/geometry.hpp"
#include "qcurv/nonlinear.hpp"

namespace qcurv {

// Checks of the Bessel layer for one order: ODE residual of I and K on
// [0.2, 8], Wronskian t (I K' - I' K) + 1 on the same range, and growth
// rates of |I| and |K| on [5, 20].
struct BesselCheck {
  std::string label;
  cplx order;
  double ode_residual = 0;
  double wronskian_error = 0;
  double growth_I = 0;  // d ln|I| / dt averaged over [5, 20], near +1
  double growth_K = 0;  // near -1
  bool dichotomy = false;
};
BesselCheck bessel_check(const std::string& label, cplx order);
// orders 5/2, i sqrt(15)/2 and sqrt(83/12)
std::vector<BesselCheck> bessel_checks();

// Conformal covariance defect on random radial pairs u = a exp(-b r^2),
// phi = c exp(-d r^2) cos(e r), on grids of points/2 and points nodes.
struct CovarianceStudy {
  int n = 0;
  std::size_t coarse_points = 0, fine_points = 0;
  std::vector<real> coarse, fine;  // sup defect on [0, r_max - 1] per pair
  real worst_ratio = 0;            // min over pairs of coarse / fine
};
CovarianceStudy covariance_study(Dimension dim, int pairs, std::uint64_t seed, std::size_t points, real r_max = 12);

// Boundary coefficient of (R~ - R)/u on a converged Q solution, next to the
// value 4(n-1)(n^2+2n-4)/(n-4) (120 for n = 4) stated for the family and the
// coefficient of the linearized identity, half of it.
struct AsymptoticsStudy {
  int n = 0;
  real amplitude = 0;
  bool converged = false;
  ScalarAsymptotics measured;
  real stated = 0;
  real linearized = 0;
  real relative_error = 0;  // against the stated value
};
real stated_scalar_coefficient(Dimension dim);
AsymptoticsStudy asymptotics_study(Dimension dim, real amplitude, real r_max, std::size_t points);

}  // namespace qcurv
