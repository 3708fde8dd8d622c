#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcurv/types.hpp"

namespace qcurv {

using cplx = std::complex<double>;

// zeta^2 + b zeta + c, the symbol of (s d_s)^2 + b s d_s + c
struct QuadraticFactor {
  double b;
  double c;
  std::pair<cplx, cplx> roots() const;
  cplx eval(cplx z) const { return z * z + b * z + c; }
};

struct IndicialPolynomial {
  std::vector<QuadraticFactor> factors;
  cplx eval(cplx z) const;
  // monic quartic coefficients, highest degree first
  std::vector<double> coefficients() const;
};

struct BoundarySpectrum {
  IndicialPolynomial poly;
  std::vector<cplx> roots;  // two per factor, factor order preserved
  std::vector<double> lambda_set;
  std::vector<bool> oscillatory;
  double delta_bar = 0;
  double delta_under = 0;
  bool log_terms_possible = false;
  // admissible weights nu for the surjective Holder setting
  double holder_lo = 0;
  double holder_hi = 0;
  std::optional<double> alpha;
  std::optional<double> alpha_tilde_sq;
};

BoundarySpectrum q_indicial_spectrum(Dimension dim);
BoundarySpectrum u_indicial_spectrum(double alpha);

// (transpose spectrum {-z-1}, adjoint spectrum {-z+2 delta-1})
std::pair<BoundarySpectrum, BoundarySpectrum> adjoint_spectra(const BoundarySpectrum& spec, double delta);

// eigenvalues of the companion matrix of a monic polynomial (highest first)
std::vector<cplx> companion_roots(const std::vector<double>& coeffs);

}  // namespace qcurv
