#pragma once

#include <complex>
#include <vector>

#include "qcurv/types.hpp"

namespace qcurv {

using cplx = std::complex<double>;

struct BesselValue {
  cplx value;
  cplx d1;  // derivative in t
  cplx d2;
  // true when value and derivatives are multiplied by e^{-t} (I) or e^{+t} (K)
  bool scaled = false;
  bool precision_warning = false;
};

// Modified Bessel functions of complex order for real t > 0. Ascending series
// summed in quad precision; K uses the asymptotic expansion for t >= 25.
// Values for t > 30 are returned scaled.
BesselValue bessel_I(cplx order, double t);
BesselValue bessel_K(cplx order, double t);

// 1/Gamma(z) in quad precision, rounded to double
cplx recip_gamma(cplx z);

enum class FactorId { L1, L2, L3 };
enum class SolutionKind { I_type, K_type };

// t^pre * Z_order(t), a solution of (t d_t)^2 - m t d_t - t^2 + c = 0
struct ModelSolution {
  FactorId factor;
  SolutionKind kind;
  double prefactor;
  cplx order;
  double m;
  double c;
  double small_t_exponent;      // Re of the leading power at t -> 0
  double membership_threshold;  // in t^delta L^2(dt) near 0 iff delta < threshold (K-type)

  struct Eval {
    cplx f, d1, d2;
  };
  Eval evaluate(double t) const;
  cplx operator()(double t) const { return evaluate(t).f; }
};

// param is n for L1/L2 and alpha for L3
std::vector<ModelSolution> model_solutions(FactorId id, double param);

// sup over the window of |L sol| divided by the sum of magnitudes of the
// individual terms of L sol (0 for the zero function)
double model_residual(const ModelSolution& sol, double t_lo, double t_hi, int samples = 400);

}  // namespace qcurv
