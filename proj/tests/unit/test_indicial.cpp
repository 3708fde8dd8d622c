#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qcurv/indicial.hpp"

using namespace qcurv;

namespace {

bool contains(const std::vector<cplx>& roots, cplx z, double tol = 1e-10) {
  return std::any_of(roots.begin(), roots.end(), [&](cplx r) { return std::abs(r - z) < tol; });
}

}  // namespace

TEST_CASE("Q spectra match the closed forms and the companion oracle") {
  for (int n = 4; n <= 10; ++n) {
    auto s = q_indicial_spectrum(Dimension(n));
    REQUIRE(s.roots.size() == 4);
    double re = (n - 1) / 2.0, im = std::sqrt(double(n * n + 2 * n - 9)) / 2;
    CHECK(contains(s.roots, {double(n), 0}));
    CHECK(contains(s.roots, {-1, 0}));
    CHECK(contains(s.roots, {re, im}));
    CHECK(contains(s.roots, {re, -im}));
    auto comp = companion_roots(s.poly.coefficients());
    for (cplx z : s.roots) CHECK(contains(comp, z, 1e-10));
    CHECK(std::abs(s.poly.eval(double(n))) < 1e-9);
    CHECK_FALSE(s.log_terms_possible);
  }
  auto s4 = q_indicial_spectrum(Dimension(4));
  CHECK(contains(s4.roots, {1.5, 1.9364916731}, 1e-10));
  CHECK(s4.delta_bar == doctest::Approx(2));
  CHECK(s4.delta_under == doctest::Approx(2));
  CHECK(contains(q_indicial_spectrum(Dimension(5)).roots, {2, 2.5495097568}, 1e-10));
}

TEST_CASE("U spectra of the three presets") {
  auto a = u_indicial_spectrum(0.5);
  for (double z : {4.0, -1.0, 1.0, 2.0}) CHECK(contains(a.roots, {z, 0}));
  CHECK(*a.alpha_tilde_sq == doctest::Approx(0.25));
  CHECK(a.log_terms_possible);

  auto d2 = u_indicial_spectrum(11.0 / 7);
  CHECK(contains(d2.roots, {4, 0}));
  CHECK(contains(d2.roots, {1.5, std::sqrt(51.0) / 6}));
  CHECK(contains(d2.roots, {1.5, -std::sqrt(51.0) / 6}));
  CHECK(*d2.alpha_tilde_sq == doctest::Approx(-17.0 / 12));

  auto p = u_indicial_spectrum(-7.0 / 16);
  CHECK(contains(p.roots, {1.5 + std::sqrt(249.0) / 6, 0}));
  CHECK(contains(p.roots, {1.5 - std::sqrt(249.0) / 6, 0}));
  CHECK(contains(p.roots, {-1, 0}));
  CHECK(*p.alpha_tilde_sq == doctest::Approx(83.0 / 12));

  CHECK_THROWS_AS(u_indicial_spectrum(-1), DegenerateOperatorError);
}

TEST_CASE("adjoint spectra") {
  auto s = q_indicial_spectrum(Dimension(4));
  auto [transpose, adjoint] = adjoint_spectra(s, 2);
  CHECK(contains(transpose.roots, {-5, 0}));
  // delta = n/2: self-adjoint weight, the set is preserved
  for (cplx z : s.roots) CHECK(contains(adjoint.roots, z));
  CHECK(contains(adjoint.roots, {1.5, -std::sqrt(15.0) / 2}));
}
