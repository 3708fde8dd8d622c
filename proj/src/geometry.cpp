#include "qcurv/geometry.hpp"

#include <cmath>

namespace qcurv {

constexpr real kBilaplacianBlend = 1;

CurvatureConstants hyperbolic_curvature_report(Dimension dim) {
  const real n = dim.n;
  CurvatureConstants c{};
  c.n = dim.n;
  c.R_hyp = -n * (n - 1);
  c.ric_sq = n * (n - 1) * (n - 1);
  c.a_n = ((n - 2) * (n - 2) + 4) / (2 * (n - 1) * (n - 2));
  c.b_n = 4 / (n - 2);
  c.c_lap = (n - 1) * (n * c.a_n - c.b_n);
  c.weyl_sq = 0;
  // n = 4 uses Q = -(Delta R - R^2 + 3|Ric|^2)/12; the general-n formula
  // reduces to n(n^2-4)/8 on Einstein data
  c.Q_hyp = dim.n == 4 ? 3 : n * (n * n - 4) / 8;
  return c;
}

ConformalFactor ConformalFactor::for_dimension(Dimension dim, RadialFunction u) {
  Regime reg = dim.n == 4 ? Regime::exp : Regime::power;
  if (reg == Regime::power)
    for (std::size_t i = 0; i < u.size(); ++i)
      if (!(1 + u[i] > 0))
        throw DomainError("conformal factor not positive at r = " + std::to_string(static_cast<double>(u.grid()->r(i))));
  return ConformalFactor{reg, std::move(u)};
}

real coth_times(real r, real d1, real d2) {
  if (r == 0) return d2;
  return d1 / std::tanh(r);
}

RadialFunction laplacian_from_jet(const Jet& j, const GridPtr& grid, Dimension dim) {
  const real m = dim.n - 1;
  std::vector<real> out(grid->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = j[2][i] + m * coth_times(grid->r(i), j[1][i], j[2][i]);
  return RadialFunction(grid, std::move(out));
}

RadialFunction laplacian_radial(const RadialFunction& f, Dimension dim) {
  return laplacian_from_jet(differentiate(f, 2), f.grid(), dim);
}

namespace {

// Delta f with the origin value extrapolated evenly from r = h, 2h, 3h, so the
// truncation error stays smooth across the origin and survives a second
// application.
std::vector<real> laplacian_extrapolated(const std::vector<real>& f, const GridPtr& grid, Dimension dim) {
  RadialFunction rf(grid, f);
  Jet j = differentiate(rf, 2);
  const real m = dim.n - 1;
  std::vector<real> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = j[2][i] + m * coth_times(grid->r(i), j[1][i], j[2][i]);
  if (grid->has_origin()) out[0] = 1.5L * out[1] - 0.6L * out[2] + 0.1L * out[3];
  return out;
}

}  // namespace

RadialFunction bilaplacian_radial(const RadialFunction& f, Dimension dim) {
  Jet j = differentiate(f, 4);
  const auto& g = *f.grid();
  const real n = dim.n, m = n - 1;
  std::vector<real> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    real r = g.r(i);
    if (r == 0) {
      out[i] = n * (n + 2) / 3 * j[4][i] + 2 * n * (n - 1) / 3 * j[2][i];
      continue;
    }
    real c = 1 / std::tanh(r);
    real c1 = 1 - c * c;
    real c2 = -2 * c * c1;
    out[i] = j[4][i] + 2 * m * c * j[3][i] + (2 * m * c1 + m * m * c * c) * j[2][i] +
             (m * c2 + m * m * c * c1) * j[1][i];
  }
  // Near the origin the 1/r^2 and 1/r^3 coefficients above amplify stencil
  // error to O(h^2); there Delta(Delta f) is used instead.
  if (g.has_origin() && g.r_max() > 2) {
    auto lap = laplacian_extrapolated(f.values(), f.grid(), dim);
    auto lap2 = laplacian_extrapolated(lap, f.grid(), dim);
    for (std::size_t i = 0; i < out.size() && g.r(i) < kBilaplacianBlend; ++i) out[i] = lap2[i];
  }
  return RadialFunction(f.grid(), std::move(out));
}

RadialFunction paneitz_apply(const RadialFunction& phi, Dimension dim) {
  const auto k = hyperbolic_curvature_report(dim);
  RadialFunction out = bilaplacian_radial(phi, dim) + k.c_lap * laplacian_radial(phi, dim);
  if (dim.n > 4) out += (dim.n - 4) / 2.0L * k.Q_hyp * phi;
  return out;
}

RadialFunction log_factor(const ConformalFactor& cf, Dimension dim) {
  if (cf.regime == Regime::exp) return cf.u;
  const real s = 2.0L / (dim.n - 4);
  return cf.u.map([s](real u) {
    if (!(1 + u > 0)) throw DomainError("conformal factor not positive");
    return s * std::log1p(u);
  });
}

RadialFunction q_of_conformal(const ConformalFactor& cf, Dimension dim) {
  const auto k = hyperbolic_curvature_report(dim);
  const auto& u = cf.u;
  if (cf.regime == Regime::exp) {
    RadialFunction pu = paneitz_apply(u, dim);
    std::vector<real> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::exp(-4 * u[i]) * (pu[i] + 2 * k.Q_hyp) / 2;
    return RadialFunction(u.grid(), std::move(out));
  }
  const real n = dim.n, p = (n + 4) / (n - 4);
  RadialFunction one_plus = u.map([](real v) { return 1 + v; });
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!(one_plus[i] > 0)) throw DomainError("conformal factor not positive");
  // P(1+u) = P u + (n-4)/2 Q; differentiating 1+u directly would round u against 1
  RadialFunction pu = paneitz_apply(u, dim);
  std::vector<real> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = 2 / (n - 4) * std::pow(one_plus[i], -p) * (pu[i] + (n - 4) / 2 * k.Q_hyp);
  return RadialFunction(u.grid(), std::move(out));
}

RadialFunction scalar_deviation(const ConformalFactor& cf, Dimension dim) {
  const auto k = hyperbolic_curvature_report(dim);
  const real n = dim.n;
  RadialFunction w = log_factor(cf, dim);
  Jet j = differentiate(w, 2);
  const auto& g = *w.grid();
  std::vector<real> out(w.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    real lap = j[2][i] + (n - 1) * coth_times(g.r(i), j[1][i], j[2][i]);
    real grad2 = j[1][i] * j[1][i];
    out[i] = k.R_hyp * std::expm1(-2 * w[i]) +
             std::exp(-2 * w[i]) * (-2 * (n - 1) * lap - (n - 2) * (n - 1) * grad2);
  }
  return RadialFunction(w.grid(), std::move(out));
}

RadialFunction scalar_of_conformal(const ConformalFactor& cf, Dimension dim) {
  const auto k = hyperbolic_curvature_report(dim);
  RadialFunction d = scalar_deviation(cf, dim);
  return d.map([&](real v) { return v + k.R_hyp; });
}

namespace {

void fill_origin(std::vector<real>& v, const RadialGrid& g) {
  if (g.has_origin()) v[0] = 1.5L * v[1] - 0.6L * v[2] + 0.1L * v[3];
}

struct MetricData {
  std::vector<real> w1, w2, lapw;  // w', w'', Delta_g w
  std::vector<real> ric_rr, ric_tt, R, ric_sq;
};

MetricData metric_data(const RadialFunction& w, Dimension dim) {
  const auto& g = *w.grid();
  const real n = dim.n;
  Jet j = differentiate(w, 2);
  MetricData d;
  const std::size_t N = w.size();
  d.w1 = j[1];
  d.w2 = j[2];
  d.lapw.resize(N);
  d.ric_rr.resize(N);
  d.ric_tt.resize(N);
  d.R.resize(N);
  d.ric_sq.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    real r = g.r(i);
    real cw = coth_times(r, j[1][i], j[2][i]);
    real w1 = j[1][i], w2 = j[2][i];
    d.lapw[i] = w2 + (n - 1) * cw;
    real common = d.lapw[i] + (n - 2) * w1 * w1;
    d.ric_rr[i] = -(n - 1) - (n - 2) * (w2 - w1 * w1) - common;
    d.ric_tt[i] = -(n - 1) - (n - 2) * cw - common;
    real e2 = std::exp(-2 * w[i]);
    d.R[i] = e2 * (d.ric_rr[i] + (n - 1) * d.ric_tt[i]);
    d.ric_sq[i] = e2 * e2 * (d.ric_rr[i] * d.ric_rr[i] + (n - 1) * d.ric_tt[i] * d.ric_tt[i]);
  }
  return d;
}

// Laplacian of g~ = e^{2w} g applied to F
std::vector<real> tilde_laplacian(const std::vector<real>& F, const RadialFunction& w, const std::vector<real>& w1,
                                  Dimension dim) {
  const auto& g = *w.grid();
  const real n = dim.n;
  RadialFunction f(w.grid(), F);
  Jet j = differentiate(f, 2);
  std::vector<real> out(F.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    real r = g.r(i);
    out[i] = std::exp(-2 * w[i]) * (j[2][i] + (n - 1) * coth_times(r, j[1][i], j[2][i]) + (n - 2) * w1[i] * j[1][i]);
  }
  return out;
}

std::vector<real> q_tilde(const RadialFunction& w, const MetricData& d, Dimension dim) {
  const real n = dim.n;
  std::vector<real> lapR = tilde_laplacian(d.R, w, d.w1, dim);
  std::vector<real> q(w.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (dim.n == 4) {
      q[i] = -(lapR[i] - d.R[i] * d.R[i] + 3 * d.ric_sq[i]) / 12;
    } else {
      real c2 = (n * n * n - 4 * n * n + 16 * n - 16) / (8 * (n - 1) * (n - 1) * (n - 2) * (n - 2));
      q[i] = -lapR[i] / (2 * (n - 1)) - 2 / ((n - 2) * (n - 2)) * d.ric_sq[i] + c2 * d.R[i] * d.R[i];
    }
  }
  return q;
}

}  // namespace

RadialFunction q_from_metric(const RadialFunction& w, Dimension dim) {
  MetricData d = metric_data(w, dim);
  auto q = q_tilde(w, d, dim);
  fill_origin(q, *w.grid());
  return RadialFunction(w.grid(), std::move(q));
}

RadialFunction paneitz_of_metric(const RadialFunction& w, const RadialFunction& phi, Dimension dim) {
  const auto& g = *w.grid();
  const auto k = hyperbolic_curvature_report(dim);
  const real n = dim.n;
  MetricData d = metric_data(w, dim);
  const std::size_t N = w.size();

  std::vector<real> lap_phi = tilde_laplacian(phi.values(), w, d.w1, dim);
  std::vector<real> bilap = tilde_laplacian(lap_phi, w, d.w1, dim);

  Jet jp = differentiate(phi, 1);
  std::vector<real> V(N);
  for (std::size_t i = 0; i < N; ++i) {
    real e2w = std::exp(2 * w[i]);
    V[i] = jp[1][i] / (e2w * e2w) * (k.a_n * d.R[i] * e2w - k.b_n * d.ric_rr[i]);
  }
  if (g.has_origin()) V[0] = 0;
  RadialFunction Vf(w.grid(), V);
  std::vector<real> dV = derivative(Vf, 1, Parity::odd);

  std::vector<real> q;
  if (dim.n > 4) q = q_tilde(w, d, dim);

  std::vector<real> out(N);
  for (std::size_t i = 0; i < N; ++i) {
    real r = g.r(i);
    if (r == 0) continue;
    real divV = dV[i] + ((n - 1) / std::tanh(r) + n * d.w1[i]) * V[i];
    out[i] = bilap[i] - divV;
    if (dim.n > 4) out[i] += (n - 4) / 2 * q[i] * phi[i];
  }
  fill_origin(out, g);
  return RadialFunction(w.grid(), std::move(out));
}

RadialFunction covariance_defect(const ConformalFactor& cf, const RadialFunction& phi, Dimension dim) {
  RadialFunction w = log_factor(cf, dim);
  RadialFunction lhs = paneitz_of_metric(w, phi, dim);
  const auto& u = cf.u;
  std::vector<real> out(u.size());
  if (cf.regime == Regime::exp) {
    RadialFunction pp = paneitz_apply(phi, dim);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = lhs[i] - std::exp(-4 * u[i]) * pp[i];
  } else {
    const real n = dim.n, p = (n + 4) / (n - 4);
    RadialFunction pp = paneitz_apply(phi + u * phi, dim);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = lhs[i] - std::pow(1 + u[i], -p) * pp[i];
  }
  return RadialFunction(u.grid(), std::move(out));
}

}  // namespace qcurv
