#include "qcurv/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "qcurv/geometry.hpp"
#include "qcurv/indicial.hpp"

namespace qcurv {

namespace {

std::vector<real> slice(const std::vector<real>& v, std::size_t lo, std::size_t hi) {
  return std::vector<real>(v.begin() + static_cast<long>(lo), v.begin() + static_cast<long>(hi) + 1);
}

}  // namespace

real remainder_exponent(const RadialFunction& u, Window w) {
  const auto& g = *u.grid();
  std::size_t lo = g.index_at_or_above(w.r_lo), hi = g.index_at_or_below(w.r_hi);
  if (hi <= lo + 16) throw WindowError("remainder window holds too few grid points");
  return envelope_exponent(slice(g.x_points(), lo, hi), slice(u.values(), lo, hi));
}

ExpansionFit fit_leading(const RadialFunction& u, const LeadingForm& form, Window w, bool log_terms_flag) {
  if (w.r_lo < u.grid()->r_min() || w.r_hi > u.grid()->r_max() || w.r_lo >= w.r_hi)
    throw WindowError("fit window outside the grid");
  if (form.oscillatory && (w.r_hi - w.r_lo) * form.beta < 3 * 2 * static_cast<real>(M_PI))
    throw WindowError("fit window holds fewer than 3 oscillation periods");
  LinearFit lf = fit_form(u, form, w);
  ExpansionFit f;
  f.leading_exponent = form.p;
  f.frequency = form.oscillatory ? form.beta : 0;
  f.a = lf.coef[0];
  f.b = form.oscillatory ? lf.coef[1] : 0;
  f.coefficients = lf.coef;
  f.x_lo = std::exp(-w.r_hi);
  f.x_hi = std::exp(-w.r_lo);
  f.residual = lf.residual;
  f.log_terms_flag = log_terms_flag;
  RadialFunction rest = u - evaluate_form(u.grid(), form, lf.coef, true);
  f.remainder_exponent = remainder_exponent(rest, w);
  return f;
}

ExpansionFit fit_leading(const RadialFunction& u, Dimension dim, Window w) {
  BoundarySpectrum spec = q_indicial_spectrum(dim);
  const real n = dim.n;
  LeadingForm form = LeadingForm::oscillating((n - 1) / 2, std::sqrt(n * n + 2 * n - 9) / 2);
  return fit_leading(u, form, w, spec.log_terms_possible);
}

real weighted_norm(const RadialFunction& u, real nu, int order) {
  if (order < 0 || order > 4) throw PreconditionError("weighted_norm order must be in 0..4");
  const auto& g = *u.grid();
  Jet j = differentiate(u, order);
  const std::size_t N = u.size();
  std::vector<real> running(N);
  real sup = 0;
  for (std::size_t i = 0; i < N; ++i) {
    real wgt = std::pow(g.x(i), -nu), m = 0;
    // x d/dx = -d/dr
    for (int k = 0; k <= order; ++k) m = std::max(m, std::fabs(j[k][i]) * wgt);
    sup = std::max(sup, m);
    running[i] = sup;
  }
  std::size_t q = g.index_at_or_above(g.r_min() + 0.75L * (g.r_max() - g.r_min()));
  if (running[N - 1] > 1.01L * running[q]) return kDivergent;
  return running[N - 1];
}

ScalarAsymptotics scalar_asymptotics(const RadialFunction& u, Dimension dim) {
  const auto& g = *u.grid();
  const real n = dim.n;
  const real p = (n - 1) / 2, beta = std::sqrt(n * n + 2 * n - 9) / 2;
  const real period = 2 * static_cast<real>(M_PI) / beta;
  const real r_hi = g.r_max() - 1, step = 1;
  if (r_hi - 2 * step - period < g.r_min() + 1) throw WindowError("grid too short for the asymptotic windows");

  RadialFunction dev = scalar_deviation(ConformalFactor::for_dimension(dim, u), dim);
  ScalarAsymptotics out;
  for (int k = 0; k < 3; ++k) {
    real hi = r_hi - (2 - k) * step, lo = hi - period;
    std::size_t i0 = g.index_at_or_above(lo), i1 = g.index_at_or_below(hi);
    real num = 0, den = 0, umax = 0;
    for (std::size_t i = i0; i <= i1; ++i) {
      real wgt = std::pow(g.x(i), -2 * p);
      num += dev[i] * u[i] * wgt;
      den += u[i] * u[i] * wgt;
      umax = std::max(umax, std::fabs(u[i]));
    }
    if (!(umax > 1e-13L) || !(den > 0))
      throw SignalToNoiseError("solution too small near the boundary for the scalar-curvature ratio");
    out.window_values.push_back(num / den);
    out.window_mid.push_back((lo + hi) / 2);
  }
  const auto& c = out.window_values;
  real d1 = c[1] - c[0], d2 = c[2] - c[1], dd = d2 - d1;
  out.coefficient = c[2];
  // Aitken only when the differences shrink geometrically
  if (dd != 0 && d1 * d2 > 0 && std::fabs(d2) < std::fabs(d1)) out.coefficient = c[2] - d2 * d2 / dd;
  return out;
}

real scalar_asymptotic_coefficient(const RadialFunction& u, Dimension dim) {
  return scalar_asymptotics(u, dim).coefficient;
}

}  // namespace qcurv
