#include "qcurv/verify.hpp"

#include <cmath>
#include <random>

namespace qcurv {

BesselCheck bessel_check(const std::string& label, cplx order) {
  BesselCheck c{label, order};
  const int samples = 400;
  for (int i = 0; i < samples; ++i) {
    double t = 0.2 + (8 - 0.2) * i / (samples - 1);
    BesselValue I = bessel_I(order, t), K = bessel_K(order, t);
    for (const BesselValue& z : {I, K}) {
      cplx a = t * t * z.d2, b = t * z.d1, d = (t * t + order * order) * z.value;
      double scale = std::abs(a) + std::abs(b) + std::abs(d);
      if (scale > 0) c.ode_residual = std::max(c.ode_residual, std::abs(a + b - d) / scale);
    }
    c.wronskian_error = std::max(c.wronskian_error, std::abs(t * (I.value * K.d1 - I.d1 * K.value) + 1.0));
  }
  std::vector<double> li, lk;
  for (double t = 5; t <= 20 + 1e-12; t += 0.5) {
    li.push_back(std::log(std::abs(bessel_I(order, t).value)));
    lk.push_back(std::log(std::abs(bessel_K(order, t).value)));
  }
  bool monotone = true;
  for (std::size_t i = 1; i < li.size(); ++i) monotone = monotone && li[i] > li[i - 1] && lk[i] < lk[i - 1];
  c.growth_I = (li.back() - li.front()) / 15;
  c.growth_K = (lk.back() - lk.front()) / 15;
  c.dichotomy = monotone && std::fabs(c.growth_I - 1) < 0.1 && std::fabs(c.growth_K + 1) < 0.1;
  return c;
}

std::vector<BesselCheck> bessel_checks() {
  return {bessel_check("5/2", {2.5, 0}), bessel_check("i sqrt(15)/2", {0, std::sqrt(15.0) / 2}),
          bessel_check("sqrt(83/12)", {std::sqrt(83.0 / 12), 0})};
}

CovarianceStudy covariance_study(Dimension dim, int pairs, std::uint64_t seed, std::size_t points, real r_max) {
  if (pairs < 1) throw PreconditionError("need at least one pair");
  CovarianceStudy s;
  s.n = dim.n;
  s.coarse_points = points / 2;
  s.fine_points = points;
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<real>(rng() >> 11) * 0x1p-53L; };
  GridPtr gc = RadialGrid::uniform(r_max, s.coarse_points), gf = RadialGrid::uniform(r_max, s.fine_points);
  s.worst_ratio = kDivergent;
  for (int k = 0; k < pairs; ++k) {
    real a = 0.05L + 0.1L * uniform(), b = 0.3L + 0.7L * uniform();
    real c = uniform(), d = 0.2L + 0.8L * uniform(), e = 2 * uniform();
    auto defect = [&](const GridPtr& g) {
      auto u = RadialFunction::sample(g, [&](real r) { return a * std::exp(-b * r * r); });
      auto phi = RadialFunction::sample(g, [&](real r) { return c * std::exp(-d * r * r) * std::cos(e * r); });
      return covariance_defect(ConformalFactor::for_dimension(dim, u), phi, dim).sup_norm({0, r_max - 1});
    };
    s.coarse.push_back(defect(gc));
    s.fine.push_back(defect(gf));
    s.worst_ratio = std::min(s.worst_ratio, s.coarse.back() / s.fine.back());
  }
  return s;
}

real stated_scalar_coefficient(Dimension dim) {
  const real n = dim.n;
  return dim.n == 4 ? 120 : 4 * (n - 1) * (n * n + 2 * n - 4) / (n - 4);
}

AsymptoticsStudy asymptotics_study(Dimension dim, real amplitude, real r_max, std::size_t points) {
  AsymptoticsStudy s;
  s.n = dim.n;
  s.amplitude = amplitude;
  s.stated = stated_scalar_coefficient(dim);
  s.linearized = s.stated / 2;
  Machinery m = Machinery::build(FactoredOperator::assemble_q(dim, RadialGrid::uniform(r_max, points)));
  IterationConfig cfg;
  cfg.epsilon = std::max(cfg.epsilon, std::fabs(amplitude));
  SolveResult res = fixed_point_solve(amplitude, TargetCurvature::hyperbolic(dim, m.op.grid()), cfg, m);
  s.converged = res.report.converged;
  if (!s.converged) return s;
  s.measured = scalar_asymptotics(res.u, dim);
  s.relative_error = std::fabs(s.measured.coefficient - s.stated) / s.stated;
  return s;
}

}  // namespace qcurv
