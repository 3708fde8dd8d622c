#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "qcurv/types.hpp"

namespace qcurv {

// Uniform grid in the geodesic radius. When r_min == 0 the first point is the
// origin and derivatives there use parity ghosts; otherwise the inner end is
// a plain boundary with shifted stencils.
class RadialGrid {
 public:
  static std::shared_ptr<const RadialGrid> uniform(real r_max, std::size_t points, real r_min = 0);

  std::size_t size() const { return r_.size(); }
  real h() const { return h_; }
  real r(std::size_t i) const { return r_[i]; }
  real x(std::size_t i) const { return x_[i]; }
  real r_min() const { return r_.front(); }
  real r_max() const { return r_.back(); }
  bool has_origin() const { return r_.front() == 0; }
  const std::vector<real>& r_points() const { return r_; }
  const std::vector<real>& x_points() const { return x_; }

  // first index with r >= value (clamped)
  std::size_t index_at_or_above(real value) const;
  // last index with r <= value (clamped)
  std::size_t index_at_or_below(real value) const;

 private:
  RadialGrid(real r_min, real r_max, std::size_t points);
  std::vector<real> r_, x_;
  real h_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

struct Window {
  real r_lo;
  real r_hi;
};

enum class Parity { even, odd };

class RadialFunction {
 public:
  RadialFunction(GridPtr grid, std::vector<real> values);

  static RadialFunction constant(GridPtr grid, real c);
  static RadialFunction sample(GridPtr grid, const std::function<real(real)>& f);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return v_.size(); }
  real operator[](std::size_t i) const { return v_[i]; }
  const std::vector<real>& values() const { return v_; }

  real sup_norm() const;
  real sup_norm(Window w) const;

  RadialFunction map(const std::function<real(real)>& f) const;

  RadialFunction& operator+=(const RadialFunction& o);
  RadialFunction& operator-=(const RadialFunction& o);
  RadialFunction& operator*=(real s);

  friend RadialFunction operator+(RadialFunction a, const RadialFunction& b) { return a += b; }
  friend RadialFunction operator-(RadialFunction a, const RadialFunction& b) { return a -= b; }
  friend RadialFunction operator*(RadialFunction a, real s) { return a *= s; }
  friend RadialFunction operator*(real s, RadialFunction a) { return a *= s; }
  friend RadialFunction operator-(RadialFunction a) { return a *= -1; }
  // pointwise product
  friend RadialFunction operator*(const RadialFunction& a, const RadialFunction& b);

 private:
  GridPtr grid_;
  std::vector<real> v_;
};

// (r, x, value) rows
void write_csv(std::ostream& os, const RadialFunction& f);

// Finite-difference weights (Fornberg) for derivative `order` at 0 from the
// given offsets (in grid units).
std::vector<real> fornberg_weights(std::span<const real> offsets, int order);

struct StencilEntry {
  std::size_t col;
  real weight;
};

// Fourth-order accurate stencil for d^order/dr^order at node i, folded onto
// grid columns. Origin ghosts use the parity of the function.
std::vector<StencilEntry> stencil_row(const RadialGrid& grid, std::size_t i, int order,
                                      Parity parity = Parity::even);

// Derivatives 0..max_order sampled on the grid.
struct Jet {
  std::array<std::vector<real>, 5> d;
  int max_order = 0;
  const std::vector<real>& operator[](int k) const { return d.at(static_cast<std::size_t>(k)); }
};

Jet differentiate(const RadialFunction& f, int max_order, Parity parity = Parity::even);
std::vector<real> derivative(const RadialFunction& f, int order, Parity parity = Parity::even);

}  // namespace qcurv
