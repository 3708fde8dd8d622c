#include "qcurv/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

namespace qcurv {

using MatR = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;
using VecR = Eigen::Matrix<real, Eigen::Dynamic, 1>;

real LeadingForm::basis_weighted(std::size_t k, real x) const {
  if (oscillatory) {
    real lx = std::log(x);
    real pw = std::pow(x, static_cast<real>(2 * (k / 2)));
    return pw * ((k % 2 == 0) ? std::cos(beta * lx) : std::sin(beta * lx));
  }
  return std::pow(x, powers[k] - p);
}

real LeadingForm::basis(std::size_t k, real x) const { return std::pow(x, p) * basis_weighted(k, x); }

namespace {

struct Solved {
  VecR coef;
  real residual;
  real condition;
};

Solved weighted_lsq(const MatR& A, const VecR& b) {
  // column equilibration before the SVD
  VecR scale(A.cols());
  MatR As = A;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    scale(j) = A.col(j).norm();
    if (scale(j) == 0) scale(j) = 1;
    As.col(j) /= scale(j);
  }
  Eigen::JacobiSVD<MatR> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  real cond = sv(0) / sv(sv.size() - 1);
  VecR c = svd.solve(b);
  for (Eigen::Index j = 0; j < c.size(); ++j) c(j) /= scale(j);
  VecR r = A * c - b;
  return {c, std::sqrt(r.squaredNorm() / static_cast<real>(std::max<Eigen::Index>(1, r.size()))), cond};
}

}  // namespace

LinearFit fit_form(const RadialFunction& u, const LeadingForm& form, Window w) {
  const auto& g = *u.grid();
  std::size_t lo = g.index_at_or_above(w.r_lo), hi = g.index_at_or_below(w.r_hi);
  const std::size_t K = form.basis_size();
  if (hi <= lo || hi - lo + 1 < 4 * K) throw WindowError("fit window holds too few grid points");
  const std::size_t M = hi - lo + 1;
  MatR A(M, K);
  VecR b(M);
  for (std::size_t i = 0; i < M; ++i) {
    real x = g.x(lo + i);
    for (std::size_t k = 0; k < K; ++k) A(i, k) = form.basis_weighted(k, x);
    b(i) = u[lo + i] * std::pow(x, -form.p);
  }
  Solved s = weighted_lsq(A, b);
  if (!(s.condition < 1e12L)) throw WindowError("ill-conditioned design matrix on the fit window");
  LinearFit f;
  f.coef.assign(s.coef.data(), s.coef.data() + s.coef.size());
  f.residual = s.residual;
  f.condition = s.condition;
  f.lo = lo;
  f.hi = hi;
  return f;
}

RadialFunction evaluate_form(const GridPtr& grid, const LeadingForm& form, const std::vector<real>& coef,
                             bool leading_only) {
  std::size_t K = leading_only ? form.leading_count() : coef.size();
  std::vector<real> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    real x = grid->x(i), s = 0;
    for (std::size_t k = 0; k < K; ++k) s += coef[k] * form.basis(k, x);
    v[i] = s;
  }
  return RadialFunction(grid, std::move(v));
}

namespace {

struct VarProFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const std::vector<real>* x;
  const std::vector<real>* y;
  real p0;

  int inputs() const { return 2; }
  int values() const { return static_cast<int>(x->size()); }

  MatR design(double p, double beta) const {
    const std::size_t M = x->size();
    MatR A(M, 6);
    for (std::size_t i = 0; i < M; ++i) {
      real xi = (*x)[i], lx = std::log(xi), w = std::pow(xi, static_cast<real>(p) - p0);
      real c = std::cos(beta * lx), s = std::sin(beta * lx);
      for (int k = 0; k < 3; ++k) {
        A(i, 2 * k) = w * c;
        A(i, 2 * k + 1) = w * s;
        w *= xi * xi;
      }
    }
    return A;
  }

  VecR rhs() const {
    VecR b(x->size());
    for (std::size_t i = 0; i < x->size(); ++i) b(i) = (*y)[i] * std::pow((*x)[i], -p0);
    return b;
  }

  int operator()(const Eigen::VectorXd& prm, Eigen::VectorXd& fvec) const {
    MatR A = design(prm(0), prm(1));
    VecR b = rhs();
    Solved s = weighted_lsq(A, b);
    VecR r = A * s.coef - b;
    for (Eigen::Index i = 0; i < r.size(); ++i) fvec(i) = static_cast<double>(r(i));
    return 0;
  }
};

}  // namespace

OscillationFit estimate_oscillation(const std::vector<real>& x, const std::vector<real>& y) {
  OscillationFit f;
  std::vector<real> crossings;
  for (std::size_t i = 1; i < y.size(); ++i)
    if ((y[i - 1] < 0) != (y[i] < 0) && y[i] != 0) {
      real l0 = std::log(x[i - 1]), l1 = std::log(x[i]);
      real t = y[i - 1] / (y[i - 1] - y[i]);
      crossings.push_back(l0 + t * (l1 - l0));
    }
  if (crossings.size() >= 2) {
    real span = std::fabs(crossings.back() - crossings.front());
    f.beta = static_cast<double>(M_PI * static_cast<real>(crossings.size() - 1) / span);
  }
  // maxima of |y| between consecutive crossings
  std::vector<real> mx, my;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= y.size(); ++i) {
    bool boundary = i == y.size() || (y[i - 1] < 0) != (y[i] < 0);
    if (!boundary) continue;
    std::size_t best = start;
    for (std::size_t j = start; j < i; ++j)
      if (std::fabs(y[j]) > std::fabs(y[best])) best = j;
    if (best != start && best + 1 != i && y[best] != 0) {
      mx.push_back(x[best]);
      my.push_back(y[best]);
    }
    start = i;
  }
  f.p = mx.size() >= 2 ? power_exponent(mx, my) : power_exponent(x, y);
  return f;
}

OscillationFit fit_exponent_frequency(const std::vector<real>& x, const std::vector<real>& y) {
  OscillationFit guess = estimate_oscillation(x, y);
  VarProFunctor fn{&x, &y, static_cast<real>(guess.p)};
  Eigen::NumericalDiff<VarProFunctor> nd(fn);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<VarProFunctor>> lm(nd);
  lm.parameters.xtol = 1e-14;
  lm.parameters.ftol = 1e-14;
  lm.parameters.maxfev = 2000;
  Eigen::VectorXd prm(2);
  prm << guess.p, guess.beta;
  lm.minimize(prm);

  OscillationFit out;
  out.p = prm(0);
  out.beta = std::fabs(prm(1));
  MatR A = fn.design(prm(0), prm(1));
  VecR b = fn.rhs();
  Solved s = weighted_lsq(A, b);
  out.a = static_cast<double>(s.coef(0));
  out.b = static_cast<double>(prm(1) < 0 ? -s.coef(1) : s.coef(1));
  out.residual = static_cast<double>(s.residual);
  return out;
}

double power_exponent(const std::vector<real>& x, const std::vector<real>& y) {
  real sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] == 0) continue;
    real lx = std::log(x[i]), ly = std::log(std::fabs(y[i]));
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0;
  real N = static_cast<real>(n);
  return static_cast<double>((N * sxy - sx * sy) / (N * sxx - sx * sx));
}

double envelope_exponent(const std::vector<real>& x, const std::vector<real>& y, int blocks) {
  if (x.size() < static_cast<std::size_t>(2 * blocks)) return power_exponent(x, y);
  std::vector<real> bx, by;
  std::size_t per = x.size() / static_cast<std::size_t>(blocks);
  for (int b = 0; b < blocks; ++b) {
    std::size_t s = static_cast<std::size_t>(b) * per, e = (b + 1 == blocks) ? x.size() : s + per;
    std::size_t best = s;
    for (std::size_t i = s; i < e; ++i)
      if (std::fabs(y[i]) > std::fabs(y[best])) best = i;
    bx.push_back(x[best]);
    by.push_back(y[best]);
  }
  return power_exponent(bx, by);
}

}  // namespace qcurv
