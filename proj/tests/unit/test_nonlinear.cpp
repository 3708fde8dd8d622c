#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qcurv/nonlinear.hpp"

using namespace qcurv;

namespace {

double D(real v) { return static_cast<double>(v); }

struct Setup {
  Dimension dim;
  GridPtr grid;
  Machinery m;
  TargetCurvature f;
  explicit Setup(int n, std::size_t points = 4096)
      : dim(n),
        grid(RadialGrid::uniform(12, points)),
        m(Machinery::build(FactoredOperator::assemble_q(dim, grid))),
        f(TargetCurvature::hyperbolic(dim, grid)) {}
};

}  // namespace

TEST_CASE("remainder helpers") {
  CHECK(D(exp_remainder(1e-9L)) == doctest::Approx(0.5e-18).epsilon(1e-8));
  CHECK(D(exp_remainder(1)) == doctest::Approx(std::exp(1.0) - 2));
  CHECK(D(binomial_remainder(1e-9L, 9)) == doctest::Approx(36e-18).epsilon(1e-7));
  CHECK(D(binomial_remainder(0.5L, 3)) == doctest::Approx(3.375 - 1 - 1.5));
}

TEST_CASE("target curvature") {
  Dimension d4(4);
  auto g = RadialGrid::uniform(12, 2048);
  auto h = TargetCurvature::hyperbolic(d4, g);
  CHECK(D(h.deviation_norm) == 0);
  CHECK(h.decay_ok);
  CHECK(D(h.nu) == doctest::Approx(1.2));
  CHECK_THROWS_AS(admissible_weight(d4, 0.5L), PreconditionError);
  CHECK_THROWS_AS(admissible_weight(d4, 1.6L), PreconditionError);
  // a constant offset does not decay
  CHECK_FALSE(TargetCurvature::constant(d4, g, 3.1L).decay_ok);
  auto b = TargetCurvature::bump(d4, g, 0.01L);
  CHECK(b.decay_ok);
  CHECK(D(b.f[0]) == doctest::Approx(3.01));
}

TEST_CASE("nonlinear right-hand side") {
  auto g = RadialGrid::uniform(12, 2048);
  auto zero = RadialFunction::constant(g, 0);
  for (int n : {4, 5, 6}) {
    Dimension d(n);
    CHECK(D(nonlinear_rhs(zero, TargetCurvature::hyperbolic(d, g), d).sup_norm()) == 0);
  }
  Dimension d4(4);
  auto shifted = nonlinear_rhs(zero, TargetCurvature::constant(d4, g, 3.25L), d4);
  CHECK(D(shifted[0]) == doctest::Approx(0.5));
  CHECK(D(shifted[1500]) == doctest::Approx(0.5));
  auto bump = TargetCurvature::bump(d4, g, 0.02L);
  auto tb = nonlinear_rhs(zero, bump, d4);
  CHECK(D(tb[700]) == doctest::Approx(D(0.04L / std::pow(std::cosh(g->r(700)), 2))));

  // quadratic in u for f = Q_g
  for (int n : {4, 5}) {
    Dimension d(n);
    auto f = TargetCurvature::hyperbolic(d, g);
    std::vector<real> c;
    for (real eps : {1e-3L, 5e-4L, 2.5e-4L}) {
      auto u = RadialFunction::sample(g, [eps](real r) { return eps * std::exp(-r) * std::cos(r); });
      c.push_back(nonlinear_rhs(u, f, d).sup_norm() / (u.sup_norm() * u.sup_norm()));
    }
    CHECK(D(c[1] / c[0]) == doctest::Approx(1).epsilon(2e-3));
    CHECK(D(c[2] / c[1]) == doctest::Approx(1).epsilon(2e-3));
  }
  CHECK_THROWS_AS(nonlinear_rhs(RadialFunction::constant(g, -1.5L), TargetCurvature::hyperbolic(Dimension(5), g),
                                Dimension(5)),
                  DomainError);
}

TEST_CASE("residual map") {
  Setup s(5);
  auto zero = RadialFunction::constant(s.grid, 0);
  CHECK(D(e_residual(zero, s.f, s.dim)) < 1e-10);
  std::vector<real> c;
  for (real eps : {1e-3L, 5e-4L}) c.push_back(e_residual(eps * *s.m.kernel.khat, s.f, s.dim) / (eps * eps));
  CHECK(D(c[0]) > 0);
  CHECK(D(c[1] / c[0]) == doctest::Approx(1).epsilon(1e-2));
}

TEST_CASE("zero amplitude") {
  Setup s(4, 2048);
  auto r = fixed_point_solve(0, s.f, {}, s.m);
  CHECK(r.report.converged);
  CHECK(r.report.iterations == 1);
  CHECK(D(r.u.sup_norm()) == 0);
}

TEST_CASE("hyperbolic-target solves") {
  for (int n : {4, 5}) {
    INFO("n = " << n);
    Setup s(n);
    auto r = fixed_point_solve(1e-3L, s.f, {}, s.m);
    REQUIRE(r.report.converged);
    CHECK(r.report.iterations <= 15);
    CHECK(D(r.report.ratios.back()) < 0.5);
    CHECK(D(r.report.residual) <= 1e-6);
    CHECK(D(std::fabs(r.report.p1_amplitude - 1e-3L)) <= 1e-9);
    CHECK(r.report.p1_consistent);
    CHECK(r.report.smallness.satisfied);
    // Q~ recomputed through the transformation law
    auto cf = ConformalFactor::for_dimension(s.dim, r.u);
    auto q = q_of_conformal(cf, s.dim);
    real qh = hyperbolic_curvature_report(s.dim).Q_hyp;
    CHECK(D((q - RadialFunction::constant(s.grid, qh)).sup_norm(interior_window(*s.grid))) < 1e-6);

    // restart from a perturbed correction
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    real a = U(rng), b = U(rng);
    auto start = RadialFunction::sample(s.grid, [=](real x) { return 1e-3L * std::exp(-x * x) * (a + b * std::cos(x)); });
    auto r2 = fixed_point_solve(1e-3L, s.f, {}, s.m, &start);
    REQUIRE(r2.report.converged);
    CHECK(D((r2.u - r.u).sup_norm()) < 10 * 1e-10);
  }
}

TEST_CASE("residual converges under refinement") {
  std::vector<real> res;
  for (std::size_t N : {1024, 2048}) {
    Setup s(5, N);
    auto r = fixed_point_solve(1e-3L, s.f, {}, s.m);
    REQUIRE(r.report.converged);
    res.push_back(r.report.residual);
  }
  CHECK(D(res[0] / res[1]) >= 4);
}

TEST_CASE("bump target") {
  Setup s(4);
  real delta = bump_closeness_bound(s.m, s.dim, 1e-3L) / 2;
  CHECK(D(delta) > 0);
  auto f = TargetCurvature::bump(s.dim, s.grid, delta);
  auto r = fixed_point_solve(1e-3L, f, {}, s.m);
  REQUIRE(r.report.converged);
  auto q = q_of_conformal(ConformalFactor::for_dimension(s.dim, r.u), s.dim);
  CHECK(D((q - f.f).sup_norm(interior_window(*s.grid))) < 1e-6);
}

TEST_CASE("family sweep") {
  Setup s(5, 2048);
  std::vector<real> amps{-1e-3L, -5e-4L, 5e-4L, 1e-3L};
  auto sw = sweep_family(amps, s.f, {}, s.m, 2);
  REQUIRE(sw.reports.size() == 4);
  const real ksup = s.m.kernel.khat->sup_norm();
  for (std::size_t i = 0; i < 4; ++i) {
    REQUIRE(sw.reports[i].converged);
    CHECK(D(std::fabs(sw.reports[i].p1_amplitude - amps[i])) <= D(1e-6L * std::fabs(amps[i]) + 1e-10L));
    for (std::size_t j = i + 1; j < 4; ++j)
      CHECK(D(sw.distances[i][j]) >= D(0.9L * std::fabs(amps[i] - amps[j]) * ksup));
  }
  // antipodal to second order
  auto sum = *sw.solutions[0] + *sw.solutions[3];
  CHECK(D(sum.sup_norm()) < D(10 * 1e-6L * ksup));
  // the correction is second order in the datum
  std::vector<real> q;
  for (real a : {1e-3L, 5e-4L, 2.5e-4L}) q.push_back(fixed_point_solve(a, s.f, {}, s.m).report.correction_norm / (a * a));
  CHECK(D(q[1] / q[0]) == doctest::Approx(1).epsilon(2e-2));
  CHECK(D(q[2] / q[1]) == doctest::Approx(1).epsilon(2e-2));

  // identical inputs, identical bits
  auto again = sweep_family(amps, s.f, {}, s.m, 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(again.solutions[i]->values() == sw.solutions[i]->values());

  auto single = sweep_family({0}, s.f, {}, s.m);
  CHECK(D(single.solutions[0]->sup_norm()) == 0);
}

TEST_CASE("large data leaves the contraction regime") {
  Setup s(5, 2048);
  auto r = fixed_point_solve(10, s.f, {}, s.m);
  CHECK_FALSE(r.report.converged);
  CHECK_FALSE(r.report.failure.empty());
}
