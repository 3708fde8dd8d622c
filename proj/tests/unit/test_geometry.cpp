#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcurv/geometry.hpp"
#include "qcurv/indicial.hpp"
#include "qcurv/verify.hpp"

using namespace qcurv;

namespace {

double D(real v) { return static_cast<double>(v); }

// r = 1 is node 256 of this grid
GridPtr oracle_grid() { return RadialGrid::uniform(16, 4097); }

RadialFunction gaussian_bump(const GridPtr& g) {
  return RadialFunction::sample(g, [](real r) { return 0.1L * std::exp(-r * r); });
}

}  // namespace

TEST_CASE("dimension precondition") {
  CHECK_THROWS_AS(Dimension(3), DimensionError);
  CHECK_NOTHROW(Dimension(4));
}

TEST_CASE("hyperbolic curvature constants") {
  auto c4 = hyperbolic_curvature_report(Dimension(4));
  CHECK(D(c4.R_hyp) == -12);
  CHECK(D(c4.Q_hyp) == 3);
  CHECK(D(c4.c_lap) == doctest::Approx(2));
  auto c5 = hyperbolic_curvature_report(Dimension(5));
  CHECK(D(c5.R_hyp) == -20);
  CHECK(D(c5.Q_hyp) == doctest::Approx(13.125));
  CHECK(D(c5.a_n) == doctest::Approx(13.0 / 24));
  CHECK(D(c5.b_n) == doctest::Approx(4.0 / 3));
  auto c6 = hyperbolic_curvature_report(Dimension(6));
  CHECK(D(c6.R_hyp) == -30);
  CHECK(D(c6.Q_hyp) == doctest::Approx(24));
  // general-n formula on Einstein data: -|Ric|^2 2/(n-2)^2 + (n^3-4n^2+16n-16) R^2 / (8(n-1)^2(n-2)^2)
  for (int n = 5; n <= 10; ++n) {
    auto c = hyperbolic_curvature_report(Dimension(n));
    double nn = n;
    double q = -2 * D(c.ric_sq) / ((nn - 2) * (nn - 2)) +
               (nn * nn * nn - 4 * nn * nn + 16 * nn - 16) * D(c.R_hyp * c.R_hyp) / (8 * (nn - 1) * (nn - 1) * (nn - 2) * (nn - 2));
    CHECK(D(c.Q_hyp) == doctest::Approx(q));
  }
}

TEST_CASE("laplacian basics") {
  auto g = RadialGrid::uniform(12, 2048);
  Dimension d4(4);
  CHECK(D(laplacian_radial(RadialFunction::constant(g, 1), d4).sup_norm()) < 1e-12);
  auto r2 = RadialFunction::sample(g, [](real r) { return r * r; });
  CHECK(D(laplacian_radial(r2, d4)[0]) == doctest::Approx(8).epsilon(1e-9));
  // indicial limit: Delta x^z / x^z -> z^2 - (n-1) z
  for (real z : {1.5L, 4.0L}) {
    auto f = RadialFunction::sample(g, [z](real r) { return std::exp(-z * r); });
    auto lf = laplacian_radial(f, d4);
    std::size_t i = g->index_at_or_above(10);
    CHECK(D(lf[i] / f[i]) == doctest::Approx(D(z * z - 3 * z)).epsilon(1e-6));
  }
}

TEST_CASE("paneitz operator on constants and boundary powers") {
  auto g = RadialGrid::uniform(12, 2048);
  CHECK(D(paneitz_apply(RadialFunction::constant(g, 1), Dimension(4)).sup_norm()) < 1e-10);
  auto p5 = paneitz_apply(RadialFunction::constant(g, 1), Dimension(5));
  CHECK(D(p5[0]) == doctest::Approx(6.5625));
  CHECK(D(p5[1000]) == doctest::Approx(6.5625));
  // (P - (n+4)/2 Q) x^z / x^z -> indicial quartic at z
  Dimension d5(5);
  const real z = 1.3L, q = hyperbolic_curvature_report(d5).Q_hyp;
  auto f = RadialFunction::sample(g, [z](real r) { return std::exp(-z * r); });
  auto pf = paneitz_apply(f, d5);
  std::size_t i = g->index_at_or_above(10);
  double lim = q_indicial_spectrum(d5).poly.eval(cplx(D(z), 0)).real();
  CHECK(D(pf[i] / f[i] - 4.5L * q) == doctest::Approx(lim).epsilon(1e-5));
}

TEST_CASE("curvature of the unperturbed and rescaled model") {
  auto g = RadialGrid::uniform(12, 2048);
  for (int n : {4, 5, 6}) {
    Dimension d(n);
    auto cf = ConformalFactor::for_dimension(d, RadialFunction::constant(g, 0));
    auto q = q_of_conformal(cf, d);
    auto c = hyperbolic_curvature_report(d);
    CHECK(D((q - RadialFunction::constant(g, c.Q_hyp)).sup_norm({0, 11})) < 1e-8);
    CHECK(D(scalar_of_conformal(cf, d)[100]) == doctest::Approx(D(c.R_hyp)));
  }
  Dimension d4(4);
  const real cst = 0.2L;
  auto cf = ConformalFactor::for_dimension(d4, RadialFunction::constant(g, cst));
  CHECK(D(q_of_conformal(cf, d4)[500]) == doctest::Approx(D(3 * std::exp(-4 * cst))));
  CHECK(D(scalar_of_conformal(cf, d4)[500]) == doctest::Approx(D(-12 * std::exp(-2 * cst))));
}

TEST_CASE("power regime needs a positive factor") {
  auto g = RadialGrid::uniform(4, 64);
  CHECK_THROWS_AS(ConformalFactor::for_dimension(Dimension(5), RadialFunction::constant(g, -1.5L)), DomainError);
  CHECK_NOTHROW(ConformalFactor::for_dimension(Dimension(4), RadialFunction::constant(g, -1.5L)));
}

TEST_CASE("curvatures match the warped-product oracle") {
  // frozen from tests/oracles/oracles.py (mpmath, curvature of d rho^2 + f^2 g_S)
  auto g = oracle_grid();
  const std::size_t i = g->index_at_or_above(1);
  auto u = gaussian_bump(g);
  {
    Dimension d(4);
    auto cf = ConformalFactor::for_dimension(d, u);
    CHECK(D(scalar_of_conformal(cf, d)[i]) == doctest::Approx(-9.9735163940688723).epsilon(1e-9));
    CHECK(D(q_of_conformal(cf, d)[i]) == doctest::Approx(3.0309503933323596).epsilon(1e-8));
    CHECK(D(q_from_metric(log_factor(cf, d), d)[i]) == doctest::Approx(3.0309503933323596).epsilon(1e-8));
  }
  {
    Dimension d(5);
    auto cf = ConformalFactor::for_dimension(d, u);
    CHECK(D(scalar_of_conformal(cf, d)[i]) == doctest::Approx(-13.269967665289922).epsilon(1e-9));
    CHECK(D(q_of_conformal(cf, d)[i]) == doctest::Approx(11.639919115127281).epsilon(1e-8));
    CHECK(D(q_from_metric(log_factor(cf, d), d)[i]) == doctest::Approx(11.639919115127281).epsilon(1e-8));
  }
}

TEST_CASE("transformation law agrees with the metric route") {
  auto g = RadialGrid::uniform(12, 2048);
  auto u = RadialFunction::sample(g, [](real r) { return 0.05L * std::exp(-0.5L * r * r) * std::cos(r); });
  for (int n : {4, 5, 7}) {
    Dimension d(n);
    auto cf = ConformalFactor::for_dimension(d, u);
    auto a = q_of_conformal(cf, d), b = q_from_metric(log_factor(cf, d), d);
    CHECK(D((a - b).sup_norm({0.05L, 11})) < 1e-6);
    // the metric route closes the origin rows at second order
    CHECK(D((a - b).sup_norm({0, 11})) < 1e-4);
    auto dev = scalar_deviation(cf, d);
    auto r = scalar_of_conformal(cf, d);
    CHECK(D((dev - (r - RadialFunction::constant(g, hyperbolic_curvature_report(d).R_hyp))).sup_norm()) < 1e-10);
  }
}

TEST_CASE("conformal covariance defect is second order") {
  for (int n : {4, 5}) {
    CovarianceStudy s = covariance_study(Dimension(n), 2, 11, 1024, 8);
    CHECK(D(s.worst_ratio) > 3.5);
    for (real v : s.fine) CHECK(D(v) < 1e-2);
  }
}
