#include "qcurv/edge_linear.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>

namespace qcurv {

namespace odeint = boost::numeric::odeint;

std::pair<cplx, cplx> Factor::roots(int n) const {
  QuadraticFactor q{-(n - 1.0), static_cast<double>(shift)};
  return q.roots();
}

namespace {

constexpr std::size_t kBand = 5;

BandedMatrix build_laplacian(const RadialGrid& g, int n) {
  const std::size_t N = g.size();
  BandedMatrix m(N, kBand, kBand);
  const real dim = n, mm = n - 1;
  (void)dim;
  for (std::size_t i = 0; i < N; ++i) {
    real r = g.r(i);
    if (r == 0) continue;
    auto d2 = stencil_row(g, i, 2);
    auto d1 = stencil_row(g, i, 1);
    real c = mm / std::tanh(r);
    for (const auto& e : d2) m.at(i, e.col) += e.weight;
    for (const auto& e : d1) m.at(i, e.col) += c * e.weight;
  }
  // The origin row is the even extrapolation of rows 1..3 rather than
  // n f''(0): its truncation error then continues that of the neighbouring
  // rows, which keeps compositions of factors fourth-order accurate.
  if (g.has_origin()) {
    const std::array<real, 3> w{1.5L, -0.6L, 0.1L};
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t j = 0; j <= 5 && j < N; ++j) m.at(0, j) += w[k] * m.get(k + 1, j);
  }
  return m;
}

}  // namespace

FactoredOperator::FactoredOperator(int n, GridPtr grid, Factor first, Factor second, KernelMode mode,
                                   BoundarySpectrum spec)
    : n_(n),
      grid_(std::move(grid)),
      first_(first),
      second_(second),
      mode_(mode),
      spec_(std::move(spec)),
      lap_(build_laplacian(*grid_, n)) {}

FactoredOperator FactoredOperator::assemble_q(Dimension dim, GridPtr grid) {
  if (!grid || grid->size() < 64) throw StencilError("grid too coarse: at least 64 points are required");
  if (!grid->has_origin()) throw DomainError("the Q-operator is assembled on the full ball (r_min = 0)");
  const real n = dim.n;
  FactoredOperator op(dim.n, std::move(grid), Factor{1, -n}, Factor{1, (n * n - 4) / 2}, KernelMode::regular,
                      q_indicial_spectrum(dim));
  op.form_ = LeadingForm::oscillating((n - 1) / 2, std::sqrt(n * n + 2 * n - 9) / 2);
  return op;
}

FactoredOperator FactoredOperator::assemble_u(double alpha, GridPtr grid) {
  if (!grid || grid->size() < 64) throw StencilError("grid too coarse: at least 64 points are required");
  BoundarySpectrum spec = u_indicial_spectrum(alpha);
  const real a = alpha;
  const real shift = 6 * a / (1 + a);
  Factor t3{1 + a, shift}, t1{1, -4};
  if (shift > 0) {
    if (!grid->has_origin()) throw DomainError("this U-case is assembled on the full ball (r_min = 0)");
    FactoredOperator op(4, std::move(grid), t1, t3, KernelMode::regular, std::move(spec));
    auto [z1, z2] = t3.roots(4);
    if (z1.imag() != 0) {
      op.form_ = LeadingForm::oscillating(z1.real(), std::fabs(z1.imag()));
    } else {
      real lo = std::min(z1.real(), z2.real()), hi = std::max(z1.real(), z2.real());
      std::vector<real> pw{lo, hi, lo + 2};
      if (std::fabs(hi - (lo + 2)) > 1e-9) pw.push_back(hi + 2);
      op.form_ = LeadingForm::real_powers(pw);
    }
    return op;
  }
  // no decaying regular solution: pose on an exterior end with the x^4 branch
  if (grid->has_origin())
    throw DomainError("alpha = " + std::to_string(alpha) +
                      " has no decaying radial kernel on the ball; use an exterior grid (r_min > 0)");
  FactoredOperator op(4, std::move(grid), t3, t1, KernelMode::decaying_branch, std::move(spec));
  op.form_ = LeadingForm::real_powers({4, 6});
  return op;
}

real FactoredOperator::decay_root(const Factor& f) const {
  auto [a, b] = f.roots(n_);
  return std::max(a.real(), b.real());
}

RadialFunction FactoredOperator::apply_laplacian(const RadialFunction& u) const {
  // difference form so that constants are annihilated exactly
  const std::size_t N = u.size();
  std::vector<real> out(N);
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t lo = i >= kBand ? i - kBand : 0, hi = std::min(N - 1, i + kBand);
    real s = 0;
    for (std::size_t j = lo; j <= hi; ++j) s += lap_.get(i, j) * (u[j] - u[i]);
    out[i] = s;
  }
  return RadialFunction(u.grid(), std::move(out));
}

RadialFunction FactoredOperator::apply_factor(const Factor& f, const RadialFunction& u) const {
  RadialFunction lu = apply_laplacian(u);
  std::vector<real> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.scale * (lu[i] + f.shift * u[i]);
  return RadialFunction(u.grid(), std::move(out));
}

RadialFunction FactoredOperator::apply_L(const RadialFunction& u) const {
  return apply_factor(first_, apply_factor(second_, u));
}

BandedMatrix FactoredOperator::factor_matrix(const Factor& f) const {
  BandedMatrix m = lap_;
  const std::size_t N = m.size();
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t lo = i >= kBand ? i - kBand : 0, hi = std::min(N - 1, i + kBand);
    for (std::size_t j = lo; j <= hi; ++j) m.at(i, j) *= f.scale;
    m.at(i, i) += f.scale * f.shift;
  }
  if (!grid_->has_origin()) {
    m.clear_row(0);
    m.at(0, 0) = 1;
  }
  return m;
}

namespace {

void set_outer_row(BandedMatrix& m, const RadialGrid& g, real value_coef, real deriv_coef) {
  const std::size_t N = m.size();
  m.clear_row(N - 1);
  for (const auto& e : stencil_row(g, N - 1, 1)) m.at(N - 1, e.col) += deriv_coef * e.weight;
  m.at(N - 1, N - 1) += value_coef;
}

std::vector<real> rhs_with_bc(const RadialFunction& f, const RadialGrid& g) {
  std::vector<real> b = f.values();
  b.back() = 0;
  if (!g.has_origin()) b.front() = 0;
  return b;
}

}  // namespace

FactorSolve solve_T1(const FactoredOperator& op, const RadialFunction& f) {
  const auto& g = *op.grid();
  BandedMatrix m = op.factor_matrix(op.first());
  set_outer_row(m, g, op.decay_root(op.first()), 1);
  BandedLU lu(std::move(m));
  RadialFunction v(op.grid(), lu.solve(rhs_with_bc(f, g)));
  real fs = std::max(f.sup_norm(), static_cast<real>(1e-300L));
  return {v, std::fabs(f[g.size() - 1]) / fs};
}

RadialFunction solve_T2(const FactoredOperator& op, const RadialFunction& v, const KernelElement& k) {
  const auto& g = *op.grid();
  BandedMatrix m = op.factor_matrix(op.second());
  if (op.mode() == KernelMode::regular) {
    const auto& kh = *k.khat;
    std::size_t N = g.size();
    real kv = kh[N - 1], kd = derivative(kh, 1)[N - 1];
    real nrm = std::hypot(kv, kd);
    set_outer_row(m, g, kv / nrm, kd / nrm);
  } else {
    set_outer_row(m, g, op.decay_root(op.second()), 1);
  }
  BandedLU lu(std::move(m));
  return RadialFunction(op.grid(), lu.solve(rhs_with_bc(v, g)));
}

RadialFunction generalized_inverse(const FactoredOperator& op, const RadialFunction& f, const KernelElement& k,
                                   const ProjectionP1& proj) {
  RadialFunction v = solve_T1(op, f).v;
  RadialFunction w = solve_T2(op, v, k);
  return w - proj.apply(w);
}

// ---- shooting -------------------------------------------------------------

namespace {

using State = std::array<real, 2>;

struct RadialOde {
  real m, shift;
  void operator()(const State& s, State& ds, real r) const {
    ds[0] = s[1];
    ds[1] = -m / std::tanh(r) * s[1] - shift * s[0];
  }
};

// even power series of the regular solution: k = sum a_j r^{2j}
std::vector<real> frobenius_coefficients(int n, real shift, std::size_t terms) {
  // b_j: coefficients of r coth r = C(r)/S(r) in powers of r^2
  std::vector<real> C(terms + 1), S(terms + 1), b(terms + 1);
  real fact = 1;
  for (std::size_t j = 0; j <= terms; ++j) {
    if (j > 0) fact *= static_cast<real>(2 * j - 1) * static_cast<real>(2 * j);
    C[j] = 1 / fact;
    S[j] = 1 / (fact * static_cast<real>(2 * j + 1));
  }
  for (std::size_t J = 0; J <= terms; ++J) {
    real s = C[J];
    for (std::size_t i = 0; i < J; ++i) s -= b[i] * S[J - i];
    b[J] = s;
  }
  const real m = n - 1;
  std::vector<real> a(terms + 1, 0);
  a[0] = 1;
  for (std::size_t J = 0; J + 1 <= terms; ++J) {
    real rhs = -shift * a[J];
    for (std::size_t l = 0; l < J; ++l) rhs -= m * b[J - l] * 2 * static_cast<real>(l + 1) * a[l + 1];
    real lhs = static_cast<real>((2 * J + 2) * (2 * J + 1)) + 2 * m * static_cast<real>(J + 1);
    a[J + 1] = rhs / lhs;
  }
  return a;
}

State series_state(const std::vector<real>& a, real r) {
  real k = 0, dk = 0, r2 = r * r, p = 1;
  for (std::size_t j = 0; j < a.size(); ++j) {
    k += a[j] * p;
    if (j > 0) dk += 2 * static_cast<real>(j) * a[j] * p / r;
    p *= r2;
  }
  return {k, dk};
}

void rk_advance(const RadialOde& ode, State& s, real r0, real r1) {
  odeint::runge_kutta_fehlberg78<State, real> stepper;
  const int sub = std::max(1, static_cast<int>(std::ceil(std::fabs(r1 - r0) / 0.004L)));
  const real dt = (r1 - r0) / sub;
  real r = r0;
  for (int k = 0; k < sub; ++k) {
    stepper.do_step(ode, s, r, dt);
    r = r0 + dt * static_cast<real>(k + 1);
  }
}

}  // namespace

RadialFunction shoot_regular(const GridPtr& grid, int n, real shift) {
  if (!grid->has_origin()) throw DomainError("regular shooting starts at the origin");
  const auto& g = *grid;
  auto a = frobenius_coefficients(n, shift, 40);
  const real r_series = 0.25L;
  std::vector<real> v(g.size());
  std::size_t i = 0;
  State s{1, 0};
  for (; i < g.size() && g.r(i) <= r_series; ++i) {
    s = series_state(a, g.r(i));
    v[i] = s[0];
  }
  RadialOde ode{static_cast<real>(n - 1), shift};
  for (; i < g.size(); ++i) {
    rk_advance(ode, s, g.r(i - 1), g.r(i));
    v[i] = s[0];
  }
  return RadialFunction(grid, std::move(v));
}

RadialFunction shoot_decaying(const GridPtr& grid, int n, real shift, real zeta) {
  const auto& g = *grid;
  const real m = n - 1;
  const real c2 = 2 * m * zeta / ((zeta + 2) * (zeta + 2) - m * (zeta + 2) + shift);
  const std::size_t N = g.size();
  real R = g.r(N - 1), x = std::exp(-R);
  // normalized so that k ~ x^zeta: store k / x_R^zeta to keep values O(1) at r_max
  State s{1 + c2 * x * x, -zeta - (zeta + 2) * c2 * x * x};
  std::vector<real> v(N);
  v[N - 1] = s[0];
  RadialOde ode{m, shift};
  for (std::size_t i = N - 1; i-- > 0;) {
    rk_advance(ode, s, g.r(i + 1), g.r(i));
    v[i] = s[0];
  }
  real xz = std::pow(x, zeta);
  for (real& e : v) e *= xz;
  return RadialFunction(grid, std::move(v));
}

// ---- kernel and projection ------------------------------------------------

Window default_fit_window(const FactoredOperator& op) {
  const auto& g = *op.grid();
  const real r_hi = g.r_max() - 0.75L;
  LeadingForm form = op.kernel_form();
  if (form.oscillatory) {
    const real period = 2 * static_cast<real>(M_PI) / form.beta;
    real r_lo = r_hi - 3.05L * period;
    if (r_lo < g.r_min() + 0.5L)
      throw WindowError("fit window holds fewer than 3 oscillation periods; increase R_max");
    return {r_lo, r_hi};
  }
  real r_lo = std::max(g.r_min() + 1, (g.r_min() + r_hi) / 2);
  if (r_hi - r_lo < 1) throw WindowError("fit window too short; increase R_max");
  return {r_lo, r_hi};
}

namespace {

std::vector<real> window_values(const std::vector<real>& v, std::size_t lo, std::size_t hi) {
  return std::vector<real>(v.begin() + static_cast<long>(lo), v.begin() + static_cast<long>(hi) + 1);
}

}  // namespace

KernelElement kernel_element(const FactoredOperator& op, real amplitude) {
  const auto& grid = op.grid();
  const Factor& f = op.second();
  RadialFunction k = op.mode() == KernelMode::regular ? shoot_regular(grid, op.n(), f.shift)
                                                      : shoot_decaying(grid, op.n(), f.shift, op.decay_root(f));
  LeadingForm form = op.kernel_form();
  Window w = default_fit_window(op);
  LinearFit fit = fit_form(k, form, w);
  real norm = form.oscillatory ? std::hypot(fit.coef[0], fit.coef[1]) : fit.coef[0];
  if (!(std::fabs(norm) > 0)) throw IllConditionedFit("kernel has no leading boundary component");
  RadialFunction khat = k * (1 / norm);

  KernelElement ke{khat * amplitude, amplitude, std::make_shared<const RadialFunction>(khat), {}, {}, 0,
                   op.mode() == KernelMode::regular};
  for (real c : fit.coef) ke.leading_fit.push_back(c / norm);

  auto xs = window_values(grid->x_points(), fit.lo, fit.hi);
  auto ys = window_values(khat.values(), fit.lo, fit.hi);
  if (form.oscillatory) {
    ke.free_fit = fit_exponent_frequency(xs, ys);
    ke.envelope_exponent = ke.free_fit.p;
  } else {
    ke.free_fit.p = power_exponent(xs, ys);
    ke.envelope_exponent = ke.free_fit.p;
  }
  return ke;
}

ProjectionP1 make_projection(const KernelElement& k, const FactoredOperator& op) {
  ProjectionP1 p{op.kernel_form(), default_fit_window(op), k.khat, {}};
  p.kcoef.assign(k.leading_fit.begin(), k.leading_fit.begin() + static_cast<long>(p.form.leading_count()));
  return p;
}

real ProjectionP1::amplitude(const RadialFunction& u) const {
  LinearFit fit = fit_form(u, form, window);
  real num = 0, den = 0;
  for (std::size_t i = 0; i < kcoef.size(); ++i) {
    num += fit.coef[i] * kcoef[i];
    den += kcoef[i] * kcoef[i];
  }
  return num / den;
}

RadialFunction ProjectionP1::apply(const RadialFunction& u) const { return *khat * amplitude(u); }

Machinery Machinery::build(FactoredOperator op) {
  KernelElement k = kernel_element(op, 1);
  ProjectionP1 p = make_projection(k, op);
  return Machinery{std::move(op), std::move(k), std::move(p)};
}

}  // namespace qcurv
