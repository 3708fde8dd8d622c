#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qcurv/ucurve.hpp"

using namespace qcurv;

namespace {

double D(real v) { return static_cast<double>(v); }

const DetPreset kPresets[] = {DetPreset::conformal_laplacian, DetPreset::spin_laplacian, DetPreset::paneitz};

RadialFunction direction(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.2, 1.5);
  real a = U(rng), b = U(rng), c = U(rng);
  return RadialFunction::sample(g, [=](real r) { return a * std::exp(-b * r * r) * std::cos(c * r); });
}

}  // namespace

TEST_CASE("preset parameters") {
  CHECK(D(u_curvature_hyperbolic(DetParams::make(DetPreset::conformal_laplacian))) == doctest::Approx(-12));
  CHECK(D(u_curvature_hyperbolic(DetParams::make(DetPreset::spin_laplacian))) == doctest::Approx(-264));
  CHECK(D(u_curvature_hyperbolic(DetParams::make(DetPreset::paneitz))) == doctest::Approx(-42));
  CHECK(D(DetParams::from_name("A").alpha()) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(D(DetParams::from_name("D2").alpha()) == doctest::Approx(11.0 / 7));
  CHECK(D(DetParams::from_name("P").alpha()) == doctest::Approx(-7.0 / 16));
  CHECK_THROWS_AS(DetParams::from_name("Q"), ConfigError);
  CHECK_THROWS_AS(DetParams::custom(0, 1, 0), ConfigError);
}

TEST_CASE("radial contractions on the model") {
  auto g = RadialGrid::uniform(8, 2048);
  auto w = RadialFunction::sample(g, [](real r) { return std::exp(-r * r); });
  auto c = radial_contractions(w);
  for (std::size_t i : {200u, 800u, 1500u}) {
    real r = g->r(i), e = std::exp(-r * r), d1 = -2 * r * e, d2 = (4 * r * r - 2) * e, ct = 1 / std::tanh(r);
    CHECK(D(c.grad_sq[i]) == doctest::Approx(D(d1 * d1)).epsilon(1e-8));
    CHECK(D(c.hess_sq[i]) == doctest::Approx(D(d2 * d2 + 3 * ct * ct * d1 * d1)).epsilon(1e-8));
    CHECK(D(c.lap[i]) == doctest::Approx(D(d2 + 3 * ct * d1)).epsilon(1e-8));
    CHECK(D(c.ric_grad[i]) == doctest::Approx(D(-3 * d1 * d1)).epsilon(1e-8));
    CHECK(D(c.hess_grad[i]) == doctest::Approx(D(d2 * d1 * d1)).epsilon(1e-8));
  }
}

TEST_CASE("U of a conformal metric against the warped-product oracle") {
  // frozen from tests/oracles/oracles.py: w = 0.1 exp(-r^2) at r = 1
  auto g = RadialGrid::uniform(16, 4097);
  auto w = RadialFunction::sample(g, [](real r) { return 0.1L * std::exp(-r * r); });
  const std::size_t i = g->index_at_or_above(1);
  CHECK(D(u_curvature_of(w, DetParams::from_name("A"))[i]) == doctest::Approx(-19.933505067649398).epsilon(1e-8));
  CHECK(D(u_curvature_of(w, DetParams::from_name("D2"))[i]) == doctest::Approx(-321.39155907348736).epsilon(1e-8));
  CHECK(D(u_curvature_of(w, DetParams::from_name("P"))[i]) == doctest::Approx(-11.194491529373197).epsilon(1e-8));
  auto zero = RadialFunction::constant(g, 0);
  for (DetPreset p : kPresets) {
    auto d = DetParams::make(p);
    CHECK(D(u_curvature_of(zero, d)[100]) == doctest::Approx(D(u_curvature_hyperbolic(d))));
  }
}

TEST_CASE("U right-hand side") {
  auto g = RadialGrid::uniform(12, 2048);
  auto zero = RadialFunction::constant(g, 0);
  for (DetPreset p : kPresets) {
    auto d = DetParams::make(p);
    real U = u_curvature_hyperbolic(d);
    CHECK(D(u_nonlinear_rhs(zero, d, U).sup_norm()) == 0);
    auto shifted = u_nonlinear_rhs(zero, d, U + 0.3L);
    CHECK(D(shifted[500]) == doctest::Approx(D(0.3L / (6 * d.gamma3))));
    std::vector<real> c;
    for (real eps : {1e-3L, 5e-4L, 2.5e-4L}) {
      auto w = RadialFunction::sample(g, [eps](real r) { return eps * std::exp(-r) * std::cos(r); });
      c.push_back(u_nonlinear_rhs(w, d, U).sup_norm() / (w.sup_norm() * w.sup_norm()));
    }
    CHECK(D(c[1] / c[0]) == doctest::Approx(1).epsilon(5e-3));
    CHECK(D(c[2] / c[1]) == doctest::Approx(1).epsilon(5e-3));
  }
}

TEST_CASE("linearized operator") {
  auto g = RadialGrid::uniform(12, 1024);
  for (real alpha : {0.5L, 11.0L / 7, -7.0L / 16, 2.0L}) {
    auto d = DetParams::custom(0, 12 * alpha, 1);
    CHECK(D(u_linearized_apply(RadialFunction::constant(g, 1), d)[300]) == doctest::Approx(D(-24 * alpha)));
  }
  // Frechet derivative of the full equation at w = 0
  std::mt19937_64 rng(3);
  auto gg = RadialGrid::uniform(12, 2048);
  for (DetPreset p : kPresets) {
    auto d = DetParams::make(p);
    real U = u_curvature_hyperbolic(d);
    for (int k = 0; k < 3; ++k) {
      auto phi = direction(gg, rng);
      const real h = 1e-5L;
      auto fd = (u_equation_map(h * phi, d, U) - u_equation_map(-h * phi, d, U)) * (1 / (2 * h));
      auto lin = u_linearized_apply(phi, d);
      CHECK(D((fd - lin).sup_norm(interior_window(*gg)) / lin.sup_norm(interior_window(*gg))) < 1e-4);
    }
  }
}

TEST_CASE("kernels follow the U spectra") {
  {
    auto m = u_machinery(DetParams::from_name("D2"), 18, 4096);
    CHECK(m.kernel.free_fit.beta == doctest::Approx(std::sqrt(51.0) / 6).epsilon(1e-3));
    CHECK(m.kernel.envelope_exponent == doctest::Approx(1.5).epsilon(1e-2));
  }
  {
    auto m = u_machinery(DetParams::from_name("A"), 18, 4096);
    CHECK(m.kernel.envelope_exponent == doctest::Approx(1).epsilon(2e-2));
  }
  {
    auto p = DetParams::from_name("P");
    auto g = u_grid(p, 18, 4096);
    CHECK_FALSE(g->has_origin());
    CHECK(D(g->r_min()) == 1);
    auto m = u_machinery(p, 18, 4096);
    CHECK(m.kernel.envelope_exponent == doctest::Approx(4).epsilon(1e-2));
    CHECK_FALSE(m.kernel.regular_at_origin);
    CHECK(std::isfinite(D(weighted_norm(*m.kernel.khat, 1))));
    CHECK(std::isfinite(D(weighted_norm(*m.kernel.khat, 3))));
  }
}

TEST_CASE("constant U solves") {
  for (const char* name : {"A", "D2", "P"}) {
    INFO(name);
    auto p = DetParams::from_name(name);
    auto m = u_machinery(p, 18, 4096);
    auto zero = u_fixed_point_solve(0, p, {}, m);
    CHECK(zero.report.converged);
    CHECK(D(zero.u.sup_norm()) == 0);
    auto r = u_fixed_point_solve(1e-3L, p, {}, m);
    REQUIRE(r.report.converged);
    CHECK(D(std::fabs(r.report.p1_amplitude - 1e-3L)) <= 1e-9);
    // independent recomputation of U through the conformal change law
    auto U = u_curvature_of(r.u, p);
    real target = u_curvature_hyperbolic(p);
    CHECK(D((U - RadialFunction::constant(m.op.grid(), target)).sup_norm(interior_window(*m.op.grid()))) < 1e-6);
  }
}

TEST_CASE("sigma_2 identity") {
  for (auto p : {DetParams::custom(0, -12, 1), DetParams::custom(0, -24, 2), DetParams::custom(0, 12, -1)}) {
    auto [lhs, rhs] = sigma2_identity_check(p);
    CHECK(D(lhs) == doctest::Approx(-3));
    CHECK(D(rhs) == doctest::Approx(-3));
  }
  CHECK_THROWS(sigma2_identity_check(DetParams::custom(0, 6, 1)));
  CHECK_THROWS_AS(u_machinery(DetParams::custom(0, -12, 1), 18, 1024), DegenerateOperatorError);
}
