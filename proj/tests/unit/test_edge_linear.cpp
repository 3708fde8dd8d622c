#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcurv/edge_linear.hpp"

using namespace qcurv;

namespace {

double D(real v) { return static_cast<double>(v); }

real sech(real r) { return 1 / std::cosh(r); }

// smooth even data with no boundary component
RadialFunction fast_mode(const GridPtr& g, real a, real b, real c) {
  return RadialFunction::sample(g, [=](real r) { return std::exp(-r * r / 4) * (a + b * std::cos(c * r)); });
}

}  // namespace

TEST_CASE("factor coefficients") {
  auto g = RadialGrid::uniform(12, 512);
  auto q4 = FactoredOperator::assemble_q(Dimension(4), g);
  CHECK(D(q4.first().shift) == -4);
  CHECK(D(q4.second().shift) == 6);
  auto u = FactoredOperator::assemble_u(0.5, g);
  CHECK(D(u.second().scale) == doctest::Approx(1.5));
  CHECK(D(u.second().scale * u.second().shift) == doctest::Approx(3));
  CHECK_THROWS_AS(FactoredOperator::assemble_q(Dimension(4), RadialGrid::uniform(12, 32)), StencilError);
  CHECK_THROWS_AS(FactoredOperator::assemble_u(-7.0 / 16, g), DomainError);
  CHECK_NOTHROW(FactoredOperator::assemble_u(-7.0 / 16, RadialGrid::uniform(18, 512, 1)));
}

TEST_CASE("L on constants") {
  auto g = RadialGrid::uniform(12, 1024);
  auto one = RadialFunction::constant(g, 1);
  auto l4 = FactoredOperator::assemble_q(Dimension(4), g).apply_L(one);
  CHECK(D(l4[0]) == doctest::Approx(-24));
  CHECK(D(l4[700]) == doctest::Approx(-24));
  auto l5 = FactoredOperator::assemble_q(Dimension(5), g).apply_L(one);
  CHECK(D(l5[300]) == doctest::Approx(-52.5));
}

TEST_CASE("regular shooting against the hypergeometric oracle") {
  // frozen from tests/oracles/oracles.py: 2F1(a, b; n/2; -sinh^2 r)
  auto g = RadialGrid::uniform(16, 4097);
  std::size_t i1 = g->index_at_or_above(1), i3 = g->index_at_or_above(3), i6 = g->index_at_or_above(6);
  auto k4 = shoot_regular(g, 4, 6);
  CHECK(D(k4[i1]) == doctest::Approx(0.45376100612925583).epsilon(1e-12));
  CHECK(D(k4[i3]) == doctest::Approx(-0.015877455801658425).epsilon(1e-11));
  CHECK(D(k4[i6]) == doctest::Approx(-0.00020007572249578453).epsilon(1e-10));
  auto k5 = shoot_regular(g, 5, 10.5L);
  CHECK(D(k5[i1]) == doctest::Approx(0.32357010829687792).epsilon(1e-12));
  CHECK(D(k5[i6]) == doctest::Approx(1.0552785591096698e-5).epsilon(1e-10));
  auto kp = shoot_regular(g, 4, -14.0L / 3);
  CHECK(D(kp[i6]) == doctest::Approx(410.10843198181389).epsilon(1e-12));
  // Frobenius start: k = 1 - 0.75 r^2 + O(r^4) for n = 4
  CHECK(D((1 - k4[4]) / (g->r(4) * g->r(4))) == doctest::Approx(0.75).epsilon(1e-4));
}

TEST_CASE("kernel element structure") {
  {
    auto op = FactoredOperator::assemble_q(Dimension(4), RadialGrid::uniform(12, 4096));
    auto k = kernel_element(op, 1);
    CHECK(k.free_fit.beta == doctest::Approx(1.9364916731).epsilon(1e-3 / 1.94));
    CHECK(k.envelope_exponent == doctest::Approx(1.5).epsilon(5e-3));
    CHECK(k.regular_at_origin);
    CHECK(D(op.apply_L(*k.khat).sup_norm() / k.khat->sup_norm()) < 1e-6);
    CHECK(D(std::hypot(k.leading_fit[0], k.leading_fit[1])) == doctest::Approx(1));
  }
  {
    auto op = FactoredOperator::assemble_q(Dimension(5), RadialGrid::uniform(12, 4096));
    auto k = kernel_element(op, 0.5L);
    CHECK(k.envelope_exponent == doctest::Approx(2).epsilon(1e-2));
    CHECK(D(op.apply_L(*k.khat).sup_norm() / k.khat->sup_norm()) < 1e-6);
    CHECK(D(k.profile[10]) == doctest::Approx(D(0.5L * (*k.khat)[10])));
  }
}

TEST_CASE("first factor solve") {
  auto g = RadialGrid::uniform(12, 2048);
  Dimension d5(5);
  auto op = FactoredOperator::assemble_q(d5, g);
  // the outer closure assumes decaying data, so constants are recovered away from r_max
  // error ~ e^{r - r_max} from the growing branch
  auto c = solve_T1(op, RadialFunction::constant(g, -5));
  CHECK(D((c.v - RadialFunction::constant(g, 1)).sup_norm({0, 2})) < 1e-4);
  CHECK(D(c.boundary_residual) == doctest::Approx(1));
  auto v0 = RadialFunction::sample(g, [](real r) { return std::pow(sech(r), 5) * (1 + 0.3L * std::cos(2 * r)); });
  auto s = solve_T1(op, op.apply_factor(op.first(), v0));
  CHECK(D((s.v - v0).sup_norm()) < 1e-6);
  CHECK(D(s.boundary_residual) < 1e-6);
  // slowly decaying data: a solution is returned and the boundary mismatch is reported
  auto slow = RadialFunction::sample(g, [](real r) { return std::exp(-0.1L * r); });
  auto ss = solve_T1(op, slow);
  CHECK(D(ss.boundary_residual) > 1e-3);
}

TEST_CASE("generalized inverse") {
  for (int n : {4, 5}) {
    INFO("n = " << n);
    Machinery m = Machinery::build(FactoredOperator::assemble_q(Dimension(n), RadialGrid::uniform(24, 8192)));
    const auto& g = m.op.grid();
    auto phi = fast_mode(g, 0.7L, 0.4L, 1.3L);
    CHECK(D(std::fabs(m.proj.amplitude(phi))) < 1e-6);
    auto Gphi = m.G(m.op.apply_L(phi));
    CHECK(D((Gphi - phi).sup_norm() / phi.sup_norm()) < 1e-6);
    auto with_kernel = m.G(m.op.apply_L(phi + *m.kernel.khat));
    CHECK(D((with_kernel - phi).sup_norm() / phi.sup_norm()) < 1e-6);
    CHECK(D(m.G(RadialFunction::constant(g, 0)).sup_norm()) == 0);
  }
}

TEST_CASE("kernel projection") {
  // three periods of the fit window must sit in the boundary regime
  Machinery m = Machinery::build(FactoredOperator::assemble_q(Dimension(4), RadialGrid::uniform(24, 8192)));
  const auto& g = m.op.grid();
  const auto& k = *m.kernel.khat;
  CHECK(D(m.proj.amplitude(0.3L * k)) == doctest::Approx(0.3).epsilon(1e-6));
  auto mixed = 0.3L * k + RadialFunction::sample(g, [](real r) { return 0.5L * sech(r) * sech(r); });
  CHECK(D(m.proj.amplitude(mixed)) == doctest::Approx(0.3).epsilon(1e-4 / 0.3));
  auto tail = RadialFunction::sample(g, [](real r) { return std::pow(sech(r), 4); });
  CHECK(D(std::fabs(m.proj.amplitude(tail))) < 1e-6);
  auto u = fast_mode(g, 1, 0.2L, 0.7L) + 0.8L * k;
  auto p1 = m.proj.apply(u);
  CHECK(D((m.proj.apply(p1) - p1).sup_norm()) < 1e-8 * D(u.sup_norm()));
  CHECK(D((m.proj.apply(k) - k).sup_norm()) < 1e-8);
}
