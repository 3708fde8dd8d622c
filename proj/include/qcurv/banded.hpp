#pragma once

#include <cstddef>
#include <vector>

#include "qcurv/types.hpp"

namespace qcurv {

// Square band matrix with kl sub- and ku super-diagonals. Storage reserves
// kl extra super-diagonals for pivoting fill-in.
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

  std::size_t size() const { return n_; }
  std::size_t kl() const { return kl_; }
  std::size_t ku() const { return ku_; }

  bool in_band(std::size_t i, std::size_t j) const { return j + kl_ >= i && j <= i + ku_; }
  real& at(std::size_t i, std::size_t j);
  real get(std::size_t i, std::size_t j) const;
  void clear_row(std::size_t i);

  std::vector<real> multiply(const std::vector<real>& v) const;

 private:
  friend class BandedLU;
  std::size_t n_, kl_, ku_, width_;
  std::vector<real> a_;
  real& raw(std::size_t i, std::size_t j) { return a_[i * width_ + (j + kl_ - i)]; }
  real raw(std::size_t i, std::size_t j) const { return a_[i * width_ + (j + kl_ - i)]; }
};

// LU with partial pivoting; the elimination order is fixed so repeated
// solves are bit-identical.
class BandedLU {
 public:
  explicit BandedLU(BandedMatrix m);
  std::vector<real> solve(std::vector<real> rhs) const;

 private:
  BandedMatrix lu_;
  std::vector<std::size_t> piv_;
};

}  // namespace qcurv
