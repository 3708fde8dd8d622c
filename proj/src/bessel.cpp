#include "qcurv/bessel.hpp"

#include <algorithm>
#include <array>
#include <cmath>

extern "C" {
#include <quadmath.h>
}

namespace qcurv {

namespace {

using quad = __float128;
using cquad = __complex128;

cquad make(quad re, quad im) {
  cquad z;
  __real__ z = re;
  __imag__ z = im;
  return z;
}
cquad to_q(cplx z) { return make(z.real(), z.imag()); }
cplx to_d(cquad z) { return {static_cast<double>(crealq(z)), static_cast<double>(cimagq(z))}; }

const quad kSeriesEps = static_cast<quad>(1e-34);
const quad kPi = acosq(static_cast<quad>(-1));

// B_{2k} = num/den, k = 1..15
const std::array<std::pair<double, double>, 15> kBernoulli = {{{1, 6},
                                                               {-1, 30},
                                                               {1, 42},
                                                               {-1, 30},
                                                               {5, 66},
                                                               {-691, 2730},
                                                               {7, 6},
                                                               {-3617, 510},
                                                               {43867, 798},
                                                               {-174611, 330},
                                                               {854513, 138},
                                                               {-236364091, 2730},
                                                               {8553103, 6},
                                                               {-23749461029.0, 870},
                                                               {8615841276005.0, 14322}}};

// Stirling series, valid for |w| >= 30
cquad log_gamma_stirling(cquad w) {
  const quad half_log_2pi = logq(2 * kPi) / 2;
  cquad s = (w - make(0.5, 0)) * clogq(w) - w + make(half_log_2pi, 0);
  cquad winv = 1 / w, winv2 = winv * winv, pw = winv;
  for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
    quad b = static_cast<quad>(kBernoulli[k - 1].first) / static_cast<quad>(kBernoulli[k - 1].second);
    quad kk = static_cast<quad>(k);
    s += b / (2 * kk * (2 * kk - 1)) * pw;
    pw *= winv2;
  }
  return s;
}

cquad recip_gamma_q(cquad z) {
  cquad prod = make(1, 0);
  cquad w = z;
  while (crealq(w) < 30 || cabsq(w) < 30) {
    prod *= w;
    w += 1;
  }
  return prod * cexpq(-log_gamma_stirling(w));
}

bool is_nonpositive_integer(cquad z) {
  return cimagq(z) == 0 && crealq(z) <= 0 && crealq(z) == floorq(crealq(z));
}

struct Triple {
  cquad f, d1, d2;
};

// I_nu and derivatives from the ascending series
Triple series_I(cquad nu, quad t) {
  if (is_nonpositive_integer(nu)) nu = -nu;
  const quad q = t * t / 4;
  cquad c = recip_gamma_q(nu + 1);
  cquad s0 = make(0, 0), s1 = make(0, 0), s2 = make(0, 0);
  quad cmax = 0;
  for (int k = 0; k < 4000; ++k) {
    if (k > 0) c = c * q / (static_cast<quad>(k) * (nu + static_cast<quad>(k)));
    cquad e = nu + static_cast<quad>(2 * k);
    s0 += c;
    s1 += e * c;
    s2 += e * (e - 1) * c;
    cmax = fmaxq(cmax, cabsq(c));
    if (k > t && cabsq(c) <= kSeriesEps * cmax) break;
  }
  cquad pre = cexpq(nu * logq(t / 2));
  return {pre * s0, pre * s1 / t, pre * s2 / (t * t)};
}

Triple series_K(cquad nu, quad t) {
  Triple ip = series_I(nu, t), im = series_I(-nu, t);
  cquad s = csinq(nu * kPi);
  cquad f = kPi / 2 / s;
  return {f * (im.f - ip.f), f * (im.d1 - ip.d1), f * (im.d2 - ip.d2)};
}

// e^t K_nu(t) by the large-argument expansion; returns value only
cquad hankel_scaled(cquad nu, quad t, bool& warn) {
  cquad mu = 4 * nu * nu;
  cquad a = make(1, 0), sum = make(1, 0);
  quad last = 1;
  for (int k = 1; k < 200; ++k) {
    quad odd = static_cast<quad>(2 * k - 1);
    cquad next = a * (mu - odd * odd) / (8 * static_cast<quad>(k) * t);
    if (cabsq(next) > cabsq(a) && k > 2) break;  // asymptotic series turned
    a = next;
    sum += a;
    last = cabsq(a);
    if (last < kSeriesEps * cabsq(sum)) break;
  }
  if (last > 1e-12 * cabsq(sum)) warn = true;
  return sqrtq(kPi / (2 * t)) * sum;
}

BesselValue finish(const Triple& v, bool scaled, bool warn) {
  return BesselValue{to_d(v.f), to_d(v.d1), to_d(v.d2), scaled, warn};
}

BesselValue bessel_K_direct(cquad nu, quad t) {
  bool warn = false;
  if (t >= 25) {
    cquad k0 = hankel_scaled(nu, t, warn);
    cquad km = hankel_scaled(nu - 1, t, warn), kp = hankel_scaled(nu + 1, t, warn);
    // all three carry the factor e^t
    cquad d1 = -(km + kp) / 2;
    cquad d2 = (-t * d1 + (t * t + nu * nu) * k0) / (t * t);
    bool scaled = t > 30;
    if (!scaled) {
      quad e = expq(-t);
      return finish({k0 * e, d1 * e, d2 * e}, false, warn);
    }
    return finish({k0, d1, d2}, true, warn);
  }
  return finish(series_K(nu, t), false, warn);
}

}  // namespace

cplx recip_gamma(cplx z) { return to_d(recip_gamma_q(to_q(z))); }

BesselValue bessel_I(cplx order, double t) {
  if (!(t > 0)) throw DomainError("Bessel argument must be positive");
  Triple v = series_I(to_q(order), t);
  if (t > 30) {
    quad e = expq(-static_cast<quad>(t));
    return finish({v.f * e, v.d1 * e, v.d2 * e}, true, false);
  }
  return finish(v, false, false);
}

BesselValue bessel_K(cplx order, double t) {
  if (!(t > 0)) throw DomainError("Bessel argument must be positive");
  cplx m(std::round(order.real()), 0);
  double dist = std::abs(order - m);
  if (dist >= 1e-3) return bessel_K_direct(to_q(order), t);
  // K is entire and even in the order: interpolate across the integer
  const std::array<double, 6> off = {-6e-3, -4e-3, -2e-3, 2e-3, 4e-3, 6e-3};
  std::array<BesselValue, 6> vals;
  for (std::size_t i = 0; i < off.size(); ++i) vals[i] = bessel_K_direct(to_q(m + off[i]), t);
  BesselValue out{};
  out.scaled = vals[0].scaled;
  for (std::size_t i = 0; i < off.size(); ++i) {
    cplx w = 1;
    for (std::size_t j = 0; j < off.size(); ++j)
      if (j != i) w *= (order - (m + off[j])) / (off[i] - off[j]);
    out.value += w * vals[i].value;
    out.d1 += w * vals[i].d1;
    out.d2 += w * vals[i].d2;
    out.precision_warning = out.precision_warning || vals[i].precision_warning;
  }
  return out;
}

ModelSolution::Eval ModelSolution::evaluate(double t) const {
  BesselValue z = kind == SolutionKind::I_type ? bessel_I(order, t) : bessel_K(order, t);
  if (z.scaled) throw DomainError("model solutions are evaluated only for t <= 30");
  double b = prefactor;
  cplx tp = std::pow(t, b);
  Eval e;
  e.f = tp * z.value;
  e.d1 = tp * (b / t * z.value + z.d1);
  e.d2 = tp * (b * (b - 1) / (t * t) * z.value + 2 * b / t * z.d1 + z.d2);
  return e;
}

std::vector<ModelSolution> model_solutions(FactorId id, double param) {
  double pre = 0, m = 0, c = 0;
  switch (id) {
    case FactorId::L1:
      if (param < 4) throw DimensionError("dimension must be >= 4");
      pre = (param - 1) / 2, m = param - 1, c = -param;
      break;
    case FactorId::L2:
      if (param < 4) throw DimensionError("dimension must be >= 4");
      pre = (param - 1) / 2, m = param - 1, c = (param * param - 4) / 2;
      break;
    case FactorId::L3:
      if (std::abs(param + 1) < 1e-14) throw DegenerateOperatorError("alpha = -1");
      pre = 1.5, m = 3, c = 6 * param / (1 + param);
      break;
  }
  double o2 = pre * pre - c;
  cplx order = o2 >= 0 ? cplx(std::sqrt(o2), 0) : cplx(0, std::sqrt(-o2));
  std::vector<ModelSolution> out;
  for (SolutionKind k : {SolutionKind::I_type, SolutionKind::K_type}) {
    ModelSolution s{id, k, pre, order, m, c, 0, 0};
    s.small_t_exponent = k == SolutionKind::I_type ? pre + order.real() : pre - order.real();
    s.membership_threshold = pre - order.real() + 0.5;
    out.push_back(s);
  }
  return out;
}

double model_residual(const ModelSolution& sol, double t_lo, double t_hi, int samples) {
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    double t = t_lo + (t_hi - t_lo) * i / (samples - 1);
    auto e = sol.evaluate(t);
    cplx a = t * t * e.d2, b = t * e.d1, c1 = sol.m * t * e.d1, d = t * t * e.f, g = sol.c * e.f;
    double scale = std::abs(a) + std::abs(b) + std::abs(c1) + std::abs(d) + std::abs(g);
    if (scale == 0) continue;
    worst = std::max(worst, std::abs(a + b - c1 - d + g) / scale);
  }
  return worst;
}

}  // namespace qcurv
