#include "qcurv/indicial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace qcurv {

std::pair<cplx, cplx> QuadraticFactor::roots() const {
  double disc = b * b - 4 * c;
  if (disc >= 0) {
    double s = std::sqrt(disc);
    return {cplx((-b - s) / 2, 0), cplx((-b + s) / 2, 0)};
  }
  double s = std::sqrt(-disc);
  return {cplx(-b / 2, s / 2), cplx(-b / 2, -s / 2)};
}

cplx IndicialPolynomial::eval(cplx z) const {
  cplx p = 1;
  for (const auto& f : factors) p *= f.eval(z);
  return p;
}

std::vector<double> IndicialPolynomial::coefficients() const {
  std::vector<double> c{1.0};
  for (const auto& f : factors) {
    std::vector<double> out(c.size() + 2, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      out[i] += c[i];
      out[i + 1] += c[i] * f.b;
      out[i + 2] += c[i] * f.c;
    }
    c = out;
  }
  return c;
}

std::vector<cplx> companion_roots(const std::vector<double>& coeffs) {
  const int d = static_cast<int>(coeffs.size()) - 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j) m(0, j) = -coeffs[static_cast<std::size_t>(j + 1)] / coeffs[0];
  for (int i = 1; i < d; ++i) m(i, i - 1) = 1;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  std::vector<cplx> out;
  for (int i = 0; i < d; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

namespace {

void verify_against_oracle(const BoundarySpectrum& s) {
  auto oracle = companion_roots(s.poly.coefficients());
  for (const auto& z : s.roots) {
    double best = 1e300;
    for (const auto& o : oracle) best = std::min(best, std::abs(z - o));
    // coincident roots are only resolved to ~sqrt(eps) by the eigen solver
    double near = 1e300;
    for (const auto& o : s.roots)
      if (&o != &z) near = std::min(near, std::abs(z - o));
    double tol = near < 1e-4 ? 1e-6 : 1e-10 * std::max(1.0, std::abs(z));
    if (best > tol) throw Error("indicial root disagrees with companion-matrix oracle");
  }
}

void finish(BoundarySpectrum& s, double beta_pre) {
  s.roots.clear();
  s.oscillatory.clear();
  s.lambda_set.clear();
  double dbar = -1e300, dund = 1e300;
  for (const auto& f : s.poly.factors) {
    auto [a, b] = f.roots();
    s.roots.push_back(a);
    s.roots.push_back(b);
    double thr = std::min(a.real(), b.real()) + 0.5;
    dbar = std::max(dbar, thr);
    dund = std::min(dund, 2 * beta_pre + 1 - thr);
  }
  for (const auto& z : s.roots) {
    s.oscillatory.push_back(std::abs(z.imag()) > 0);
    s.lambda_set.push_back(0.5 + z.real());
  }
  s.delta_bar = dbar;
  s.delta_under = dund;
  // only roots that can occur in expansions of decaying solutions (Re > 0)
  s.log_terms_possible = false;
  for (std::size_t i = 0; i < s.roots.size(); ++i)
    for (std::size_t j = i + 1; j < s.roots.size(); ++j) {
      if (!(s.roots[i].real() > 0 && s.roots[j].real() > 0)) continue;
      cplx d = s.roots[i] - s.roots[j];
      if (std::abs(d.imag()) < 1e-12 && std::abs(d.real() - std::round(d.real())) < 1e-12)
        s.log_terms_possible = true;
    }
  verify_against_oracle(s);
}

}  // namespace

BoundarySpectrum q_indicial_spectrum(Dimension dim) {
  const double n = dim.n;
  BoundarySpectrum s;
  s.poly.factors = {{-(n - 1), -n}, {-(n - 1), (n * n - 4) / 2}};
  finish(s, (n - 1) / 2);
  s.holder_lo = 0;
  s.holder_hi = (n - 1) / 2;
  return s;
}

BoundarySpectrum u_indicial_spectrum(double alpha) {
  if (std::abs(alpha + 1) < 1e-14)
    throw DegenerateOperatorError("alpha = -1: the U-equation linearization degenerates to second order");
  BoundarySpectrum s;
  const double shift = 6 * alpha / (1 + alpha);
  s.poly.factors = {{-3, -4}, {-3, shift}};
  finish(s, 1.5);
  s.alpha = alpha;
  s.alpha_tilde_sq = 9.0 / 4.0 - shift;
  s.holder_lo = 0;
  s.holder_hi = 1.5;
  auto [a, b] = s.poly.factors[1].roots();
  if (a.imag() == 0 && a.real() > 0 && b.real() > 0) s.holder_hi = std::min(1.5, std::min(a.real(), b.real()));
  return s;
}

std::pair<BoundarySpectrum, BoundarySpectrum> adjoint_spectra(const BoundarySpectrum& spec, double delta) {
  BoundarySpectrum t = spec, a = spec;
  for (std::size_t i = 0; i < spec.roots.size(); ++i) {
    t.roots[i] = -spec.roots[i] - 1.0;
    a.roots[i] = -spec.roots[i] + 2 * delta - 1.0;
    t.lambda_set[i] = 0.5 + t.roots[i].real();
    a.lambda_set[i] = 0.5 + a.roots[i].real();
  }
  // the polynomials are not re-derived; only the root sets are meaningful
  t.poly.factors.clear();
  a.poly.factors.clear();
  return {t, a};
}

}  // namespace qcurv
