#include "qcurv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <string>

namespace qcurv {

RadialGrid::RadialGrid(real r_min, real r_max, std::size_t points) : r_(points), x_(points) {
  h_ = (r_max - r_min) / static_cast<real>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    r_[i] = (i + 1 == points) ? r_max : r_min + h_ * static_cast<real>(i);
    x_[i] = std::exp(-r_[i]);
  }
}

std::shared_ptr<const RadialGrid> RadialGrid::uniform(real r_max, std::size_t points, real r_min) {
  if (points < 16) throw StencilError("grid needs at least 16 points");
  if (!(r_min >= 0) || !(r_max > r_min)) throw DomainError("grid requires 0 <= r_min < r_max");
  return std::shared_ptr<const RadialGrid>(new RadialGrid(r_min, r_max, points));
}

std::size_t RadialGrid::index_at_or_above(real value) const {
  auto it = std::lower_bound(r_.begin(), r_.end(), value - h_ * 1e-9L);
  if (it == r_.end()) return r_.size() - 1;
  return static_cast<std::size_t>(it - r_.begin());
}

std::size_t RadialGrid::index_at_or_below(real value) const {
  auto it = std::upper_bound(r_.begin(), r_.end(), value + h_ * 1e-9L);
  if (it == r_.begin()) return 0;
  return static_cast<std::size_t>(it - r_.begin()) - 1;
}

RadialFunction::RadialFunction(GridPtr grid, std::vector<real> values)
    : grid_(std::move(grid)), v_(std::move(values)) {
  if (!grid_) throw DomainError("RadialFunction without grid");
  if (v_.size() != grid_->size())
    throw DomainError("RadialFunction length " + std::to_string(v_.size()) + " does not match grid size " +
                      std::to_string(grid_->size()));
  for (std::size_t i = 0; i < v_.size(); ++i)
    if (!std::isfinite(v_[i]))
      throw DomainError("non-finite value at r = " + std::to_string(static_cast<double>(grid_->r(i))));
}

RadialFunction RadialFunction::constant(GridPtr grid, real c) {
  std::vector<real> v(grid->size(), c);
  return RadialFunction(std::move(grid), std::move(v));
}

RadialFunction RadialFunction::sample(GridPtr grid, const std::function<real(real)>& f) {
  std::vector<real> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->r(i));
  return RadialFunction(std::move(grid), std::move(v));
}

real RadialFunction::sup_norm() const {
  real m = 0;
  for (real v : v_) m = std::max(m, std::fabs(v));
  return m;
}

real RadialFunction::sup_norm(Window w) const {
  real m = 0;
  std::size_t a = grid_->index_at_or_above(w.r_lo), b = grid_->index_at_or_below(w.r_hi);
  for (std::size_t i = a; i <= b && i < v_.size(); ++i) m = std::max(m, std::fabs(v_[i]));
  return m;
}

RadialFunction RadialFunction::map(const std::function<real(real)>& f) const {
  std::vector<real> v(v_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(v_[i]);
  return RadialFunction(grid_, std::move(v));
}

static void check_same(const RadialFunction& a, const RadialFunction& b) {
  if (a.size() != b.size()) throw DomainError("RadialFunction grids differ");
}

RadialFunction& RadialFunction::operator+=(const RadialFunction& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

RadialFunction& RadialFunction::operator-=(const RadialFunction& o) {
  check_same(*this, o);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

RadialFunction& RadialFunction::operator*=(real s) {
  for (real& v : v_) v *= s;
  return *this;
}

RadialFunction operator*(const RadialFunction& a, const RadialFunction& b) {
  check_same(a, b);
  std::vector<real> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
  return RadialFunction(a.grid(), std::move(v));
}

void write_csv(std::ostream& os, const RadialFunction& f) {
  os << "r,x,value\n";
  char buf[128];
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e\n", static_cast<double>(f.grid()->r(i)),
                  static_cast<double>(f.grid()->x(i)), static_cast<double>(f[i]));
    os << buf;
  }
}

std::vector<real> fornberg_weights(std::span<const real> x, int m) {
  const std::size_t n = x.size();
  std::vector<std::vector<real>> c(n, std::vector<real>(static_cast<std::size_t>(m) + 1, 0));
  real c1 = 1, c4 = x[0];
  c[0][0] = 1;
  for (std::size_t i = 1; i < n; ++i) {
    int mn = std::min(static_cast<int>(i), m);
    real c2 = 1, c5 = c4;
    c4 = x[i];
    for (std::size_t j = 0; j < i; ++j) {
      real c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (static_cast<real>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - static_cast<real>(k) * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<real> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][static_cast<std::size_t>(m)];
  return w;
}

std::vector<StencilEntry> stencil_row(const RadialGrid& grid, std::size_t i, int order, Parity parity) {
  if (order < 0 || order > 4) throw StencilError("derivative order must be in 0..4");
  const long N = static_cast<long>(grid.size());
  const long ii = static_cast<long>(i);
  if (order == 0) return {{i, 1}};
  const long half = order <= 2 ? 2 : 3;
  const long width = order + 4;
  if (N < width + 2) throw StencilError("grid too short for a derivative of order " + std::to_string(order));

  std::vector<long> offs;
  bool centered = ii + half <= N - 1 && (grid.has_origin() || ii - half >= 0);
  if (centered) {
    for (long o = -half; o <= half; ++o) offs.push_back(o);
  } else {
    long start = (ii + half > N - 1) ? N - width : 0;
    for (long j = 0; j < width; ++j) offs.push_back(start + j - ii);
  }
  std::vector<real> xo(offs.begin(), offs.end());
  std::vector<real> w = fornberg_weights(xo, order);
  const real scale = std::pow(grid.h(), -static_cast<real>(order));

  std::vector<StencilEntry> row;
  for (std::size_t k = 0; k < offs.size(); ++k) {
    long j = ii + offs[k];
    real s = 1;
    if (j < 0) {
      j = -j;
      if (parity == Parity::odd) s = -1;
    }
    auto col = static_cast<std::size_t>(j);
    real wk = w[k] * scale * s;
    auto it = std::find_if(row.begin(), row.end(), [&](const StencilEntry& e) { return e.col == col; });
    if (it != row.end())
      it->weight += wk;
    else
      row.push_back({col, wk});
  }
  return row;
}

std::vector<real> derivative(const RadialFunction& f, int order, Parity parity) {
  const auto& g = *f.grid();
  std::vector<real> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    auto row = stencil_row(g, i, order, parity);
    real s = 0;
    if (order == 0) {
      s = f[i];
    } else if (parity == Parity::even) {
      // difference form keeps constants exactly annihilated
      for (const auto& e : row) s += e.weight * (f[e.col] - f[i]);
    } else {
      for (const auto& e : row) s += e.weight * f[e.col];
    }
    out[i] = s;
  }
  return out;
}

Jet differentiate(const RadialFunction& f, int max_order, Parity parity) {
  if (max_order < 0 || max_order > 4) throw StencilError("jet order must be in 0..4");
  Jet j;
  j.max_order = max_order;
  for (int k = 0; k <= max_order; ++k) j.d[static_cast<std::size_t>(k)] = derivative(f, k, parity);
  return j;
}

}  // namespace qcurv
