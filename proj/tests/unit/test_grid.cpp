#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qcurv/grid.hpp"

using namespace qcurv;

TEST_CASE("uniform grid layout") {
  auto g = RadialGrid::uniform(12, 4096);
  CHECK(g->size() == 4096);
  CHECK(g->r(0) == 0);
  CHECK(g->r_max() == doctest::Approx(12));
  CHECK(g->has_origin());
  for (std::size_t i = 1; i < g->size(); ++i) {
    REQUIRE(g->r(i) > g->r(i - 1));
    REQUIRE(g->x(i) < g->x(i - 1));
  }
  CHECK(g->x(0) == 1);
  CHECK(static_cast<double>(g->x(g->size() - 1)) == doctest::Approx(std::exp(-12.0)));

  auto end = RadialGrid::uniform(12, 512, 1);
  CHECK_FALSE(end->has_origin());
  CHECK(end->r_min() == 1);
}

TEST_CASE("grid preconditions") {
  CHECK_THROWS_AS(RadialGrid::uniform(12, 8), StencilError);
  CHECK_THROWS_AS(RadialGrid::uniform(-1, 100), DomainError);
  CHECK_THROWS_AS(RadialGrid::uniform(5, 100, 6), DomainError);
}

TEST_CASE("radial functions reject bad data") {
  auto g = RadialGrid::uniform(4, 64);
  CHECK_THROWS_AS(RadialFunction(g, std::vector<real>(10, 0)), DomainError);
  std::vector<real> v(64, 0);
  v[5] = NAN;
  CHECK_THROWS_AS(RadialFunction(g, v), DomainError);
}

TEST_CASE("window lookups") {
  auto g = RadialGrid::uniform(16, 4097);
  CHECK(g->r(g->index_at_or_above(1)) == 1);
  CHECK(g->r(g->index_at_or_below(1.001L)) == 1);
  CHECK(g->index_at_or_above(100) == g->size() - 1);
}

TEST_CASE("fornberg weights reproduce the classical stencils") {
  std::vector<real> off{-2, -1, 0, 1, 2};
  auto w1 = fornberg_weights(off, 1);
  CHECK(static_cast<double>(w1[0]) == doctest::Approx(1.0 / 12));
  CHECK(static_cast<double>(w1[1]) == doctest::Approx(-8.0 / 12));
  CHECK(static_cast<double>(w1[2]) == doctest::Approx(0).epsilon(1e-15));
  auto w2 = fornberg_weights(off, 2);
  CHECK(static_cast<double>(w2[2]) == doctest::Approx(-30.0 / 12));
  auto w4 = fornberg_weights(off, 4);
  CHECK(static_cast<double>(w4[0]) == doctest::Approx(1));
  CHECK(static_cast<double>(w4[2]) == doctest::Approx(6));
}

TEST_CASE("derivatives are fourth-order accurate") {
  // f = cos(r) exp(-r^2/4) is even; compare errors on two grids
  auto err = [](std::size_t N) {
    auto g = RadialGrid::uniform(8, N);
    auto f = RadialFunction::sample(g, [](real r) { return std::cos(r) * std::exp(-r * r / 4); });
    Jet j = differentiate(f, 4);
    real worst = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      real r = g->r(i), e = std::exp(-r * r / 4);
      // second derivative by hand
      real d2 = e * (-std::cos(r) + r * std::sin(r) + (r * r / 4 - 0.5L) * std::cos(r));
      worst = std::max(worst, std::fabs(j[2][i] - d2));
    }
    return worst;
  };
  real e1 = err(256), e2 = err(512);
  CHECK(e1 / e2 > 12);
  CHECK(e2 < 1e-6);
}

TEST_CASE("odd parity at the origin") {
  auto g = RadialGrid::uniform(6, 1024);
  auto f = RadialFunction::sample(g, [](real r) { return std::sin(r); });
  auto d1 = derivative(f, 1, Parity::odd);
  CHECK(static_cast<double>(d1[0]) == doctest::Approx(1).epsilon(1e-10));
}

TEST_CASE("csv columns") {
  auto g = RadialGrid::uniform(4, 16);
  std::ostringstream os;
  write_csv(os, RadialFunction::constant(g, 2));
  std::string first;
  std::getline(std::istringstream(os.str()) >> std::ws, first);
  CHECK(first == "r,x,value");
}
