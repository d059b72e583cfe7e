#include "okl/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "okl/errors.hpp"

namespace okl {

double modular(const NFunction& m, const Fiber& fiber, const FiberVector& x) {
  require_bound(fiber, x.size(), "modular");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += fiber.weight(i) * m.eval(x[i]);
  return s;
}

double modular_scaled(const NFunction& m, const Fiber& fiber, const FiberVector& x, double c) {
  require_bound(fiber, x.size(), "modular");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += fiber.weight(i) * m.eval(c * x[i]);
  return s;
}

LuxemburgResult luxemburg_norm(const NFunction& m, const Fiber& fiber, const FiberVector& x) {
  if (!m.valid()) throw DomainError("luxemburg_norm: M fails the N-function axioms");
  require_bound(fiber, x.size(), "luxemburg_norm");
  LuxemburgResult r;
  const double sup = x.max_abs();
  if (sup < kZeroVectorThreshold) return r;

  auto mod_at = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += fiber.weight(i) * m.eval(x[i] / lambda);
    return s;
  };

  // Exact for constant |x|; a good starting point otherwise.
  const double lambda0 = sup / m.inverse(1.0 / fiber.total_mass());
  double hi = lambda0;
  double lo = lambda0;
  while (!(mod_at(hi) <= 1.0)) {
    hi *= 2.0;
    ++r.iterations;
  }
  while (mod_at(lo) < 1.0) {
    lo *= 0.5;
    ++r.iterations;
  }
  while (hi - lo > 1e-12 * hi && r.iterations < 4000) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mod_at(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
    ++r.iterations;
  }
  r.value = hi;
  r.lambda_lo = lo;
  r.lambda_hi = hi;
  r.modular_at_lambda = mod_at(hi);
  return r;
}

namespace {

// Pushes y onto the level set \int N(s y) dmu = 1 by bisection on s.
double rescale_to_unit_modular(const NFunction& n, const Fiber& fiber, FiberVector& y) {
  double cur = modular(n, fiber, y);
  if (cur == 1.0 || y.max_abs() == 0.0) return cur;
  double lo = 0.0;
  double hi = 1.0;
  if (cur < 1.0) {
    lo = 1.0;
    hi = 2.0;
    while (modular_scaled(n, fiber, y, hi) < 1.0) {
      lo = hi;
      hi *= 2.0;
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (modular_scaled(n, fiber, y, mid) <= 1.0)
      lo = mid;
    else
      hi = mid;
  }
  y = y.scaled(lo);
  return modular(n, fiber, y);
}

double snap_to_jump(const NFunction& m, double t) {
  const auto& k = m.knots();
  for (std::size_t j = 1; j < k.size(); ++j)
    if (k[j].t == k[j - 1].t && k[j].p != k[j - 1].p && std::fabs(t - k[j].t) <= 1e-9 * k[j].t) return k[j].t;
  return t;
}

}  // namespace

OrliczNormResult orlicz_norm(const NFunction& m, const NFunction& complement, const Fiber& fiber,
                             const FiberVector& x) {
  if (!m.valid()) throw DomainError("orlicz_norm: M fails the N-function axioms");
  require_bound(fiber, x.size(), "orlicz_norm");
  OrliczNormResult r;
  r.witness = FiberVector::zeros(x.size());
  if (x.max_abs() < kZeroVectorThreshold) return r;

  auto amemiya = [&](double log_k) {
    const double k = std::exp(log_k);
    const double v = (1.0 + modular_scaled(m, fiber, x, k)) / k;
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  // Bracket the minimum of the unimodal function u -> F(e^u), starting from
  // k = 1 / luxemburg norm.
  const double lux = luxemburg_norm(m, fiber, x).value;
  double step = std::log(2.0);
  double a = std::log(1.0 / lux);
  double b = a + step;
  double fa = amemiya(a);
  double fb = amemiya(b);
  if (fb > fa) {
    std::swap(a, b);
    std::swap(fa, fb);
    step = -step;
  }
  double c = b + step;
  double fc = amemiya(c);
  while (fc < fb) {
    step *= 2.0;
    a = b;
    fa = fb;
    b = c;
    fb = fc;
    c = b + step;
    fc = amemiya(c);
    ++r.iterations;
  }
  double lo = std::min(a, c);
  double hi = std::max(a, c);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = amemiya(x1);
  double f2 = amemiya(x2);
  while (hi - lo > 1e-11 && r.iterations < 500) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = amemiya(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = amemiya(x2);
    }
    ++r.iterations;
  }
  double best_u = f1 <= f2 ? x1 : x2;
  double best_f = std::min(f1, f2);
  if (fb < best_f) {
    best_u = b;
    best_f = fb;
  }
  r.value = best_f;
  r.amemiya_k = std::exp(best_u);

  // Witness from the first-order condition y = sign(x) p(k* |x|). When the
  // density jumps at some k*|x_i| the optimum lies between the one-sided
  // limits, so interpolate between them before rescaling. k* is only known
  // to ~1e-11, so arguments that close to a jump are moved onto it.
  std::vector<double> right(x.size());
  std::vector<double> left(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = snap_to_jump(m, r.amemiya_k * std::fabs(x[i]));
    const double sgn = x[i] < 0.0 ? -1.0 : 1.0;
    right[i] = sgn * m.density(t);
    left[i] = sgn * m.density_left(t);
  }
  FiberVector y_right(right);
  FiberVector y_left(left);
  FiberVector y = y_right;
  if (modular(complement, fiber, y_right) > 1.0 && modular(complement, fiber, y_left) < 1.0) {
    double lo_t = 0.0;
    double hi_t = 1.0;
    for (int it = 0; it < 200 && hi_t - lo_t > 1e-16; ++it) {
      const double mid = 0.5 * (lo_t + hi_t);
      FiberVector trial = y_left.scaled(1.0 - mid) + y_right.scaled(mid);
      if (modular(complement, fiber, trial) <= 1.0)
        lo_t = mid;
      else
        hi_t = mid;
    }
    y = y_left.scaled(1.0 - lo_t) + y_right.scaled(lo_t);
  }
  r.witness_modular = rescale_to_unit_modular(complement, fiber, y);
  r.witness = std::move(y);
  return r;
}

OrliczNormResult orlicz_norm(const NFunction& m, const Fiber& fiber, const FiberVector& x) {
  if (!m.valid()) throw DomainError("orlicz_norm: M fails the N-function axioms");
  return orlicz_norm(m, m.complement(), fiber, x);
}

}  // namespace okl
