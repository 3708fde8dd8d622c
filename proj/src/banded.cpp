#include "qcurv/banded.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qcurv {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), a_(n * (2 * kl + ku + 1), 0) {}

real& BandedMatrix::at(std::size_t i, std::size_t j) {
  if (i >= n_ || j >= n_ || !in_band(i, j))
    throw StencilError("band entry (" + std::to_string(i) + "," + std::to_string(j) + ") outside bandwidth");
  return raw(i, j);
}

real BandedMatrix::get(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_ || !in_band(i, j)) return 0;
  return raw(i, j);
}

void BandedMatrix::clear_row(std::size_t i) {
  std::size_t lo = i >= kl_ ? i - kl_ : 0, hi = std::min(n_ - 1, i + ku_);
  for (std::size_t j = lo; j <= hi; ++j) raw(i, j) = 0;
}

std::vector<real> BandedMatrix::multiply(const std::vector<real>& v) const {
  std::vector<real> out(n_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t lo = i >= kl_ ? i - kl_ : 0, hi = std::min(n_ - 1, i + ku_);
    real s = 0;
    for (std::size_t j = lo; j <= hi; ++j) s += raw(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

BandedLU::BandedLU(BandedMatrix m) : lu_(std::move(m)), piv_(lu_.n_) {
  const std::size_t n = lu_.n_, kl = lu_.kl_, ku = lu_.ku_;
  real scale = 0;
  for (real v : lu_.a_) scale = std::max(scale, std::fabs(v));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t last = std::min(n - 1, k + kl);
    std::size_t p = k;
    real best = std::fabs(lu_.raw(k, k));
    for (std::size_t i = k + 1; i <= last; ++i) {
      real v = std::fabs(lu_.raw(i, k));
      if (v > best) best = v, p = i;
    }
    if (!(best > scale * 1e-30L))
      throw SingularMatrixError("banded matrix singular at column " + std::to_string(k));
    piv_[k] = p;
    std::size_t jmax = std::min(n - 1, k + ku + kl);
    if (p != k)
      for (std::size_t j = k; j <= jmax; ++j) std::swap(lu_.raw(k, j), lu_.raw(p, j));
    const real pivot = lu_.raw(k, k);
    for (std::size_t i = k + 1; i <= last; ++i) {
      real l = lu_.raw(i, k) / pivot;
      lu_.raw(i, k) = l;
      if (l == 0) continue;
      for (std::size_t j = k + 1; j <= jmax; ++j) lu_.raw(i, j) -= l * lu_.raw(k, j);
    }
  }
}

std::vector<real> BandedLU::solve(std::vector<real> b) const {
  const std::size_t n = lu_.n_, kl = lu_.kl_, ku = lu_.ku_;
  if (b.size() != n) throw DomainError("right-hand side size mismatch");
  for (std::size_t k = 0; k < n; ++k) {
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
    std::size_t last = std::min(n - 1, k + kl);
    for (std::size_t i = k + 1; i <= last; ++i) b[i] -= lu_.raw(i, k) * b[k];
  }
  for (std::size_t kk = n; kk-- > 0;) {
    std::size_t jmax = std::min(n - 1, kk + ku + kl);
    real s = b[kk];
    for (std::size_t j = kk + 1; j <= jmax; ++j) s -= lu_.raw(kk, j) * b[j];
    b[kk] = s / lu_.raw(kk, kk);
  }
  return b;
}

}  // namespace qcurv
