#include "oracles/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace okl::oracle {
namespace {

double simpson_step(const ScalarFn& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::fabs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double bisect_increasing(const ScalarFn& g, double target) {
  double lo = 0.0;
  double hi = 1.0;
  while (g(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::runtime_error("bisect_increasing: no bracket");
  }
  for (int it = 0; it < 400 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double adaptive_simpson(const ScalarFn& f, double a, double b, double tol, int max_depth) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double piecewise_linear_density(const std::vector<DensityKnot>& knots, double tail_slope, double t) {
  const auto& last = knots.back();
  if (t >= last.t) return last.p + tail_slope * (t - last.t);
  // Last knot with knot.t <= t (right-continuous at jumps).
  std::size_t i = 0;
  while (i + 1 < knots.size() && knots[i + 1].t <= t) ++i;
  const auto& a = knots[i];
  const auto& b = knots[i + 1];
  return a.p + (b.p - a.p) * (t - a.t) / (b.t - a.t);
}

double quadrature_tabulated(const std::vector<DensityKnot>& knots, double tail_slope, double t) {
  t = std::fabs(t);
  const ScalarFn p = [&](double s) { return piecewise_linear_density(knots, tail_slope, s); };
  double total = 0.0;
  double prev = 0.0;
  for (const auto& k : knots) {
    const double edge = std::min(k.t, t);
    if (edge > prev) {
      // Stay strictly inside each piece so the jump side never leaks in.
      const ScalarFn inner = [&, prev, edge](double s) {
        return p(std::clamp(s, prev, std::nextafter(edge, prev)));
      };
      total += adaptive_simpson(inner, prev, edge, 1e-15);
      prev = edge;
    }
    if (k.t >= t) break;
  }
  if (t > prev) total += adaptive_simpson(p, prev, t, 1e-15);
  return total;
}

double legendre_conjugate(const ScalarFn& m, double s) {
  if (s <= 0.0) return 0.0;
  double hi = 1.0;
  while (s * hi - m(hi) >= 0.0) hi *= 2.0;
  double lo = 0.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - g * (hi - lo);
  double b = lo + g * (hi - lo);
  double fa = s * a - m(a);
  double fb = s * b - m(b);
  for (int it = 0; it < 300; ++it) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = s * b - m(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = s * a - m(a);
    }
  }
  return std::max(fa, fb);
}

ClosedForm closed_power(double r, double c) {
  ClosedForm cf;
  cf.m = [r, c](double t) { return c * std::pow(std::fabs(t), r); };
  cf.p = [r, c](double t) { return c * r * std::pow(t, r - 1.0); };
  // Maximizer of s t - c t^r is t* = (s / (c r))^(1/(r-1)); N(s) = s t* (r-1)/r.
  cf.q = [r, c](double s) { return std::pow(s / (c * r), 1.0 / (r - 1.0)); };
  cf.n = [r, c](double s) {
    s = std::fabs(s);
    const double t = std::pow(s / (c * r), 1.0 / (r - 1.0));
    return s * t * (r - 1.0) / r;
  };
  cf.m_inverse = [r, c](double y) { return std::pow(y / c, 1.0 / r); };
  return cf;
}

ClosedForm closed_exp_type() {
  ClosedForm cf;
  cf.m = [](double t) {
    t = std::fabs(t);
    if (t < 1e-3) return t * t * (0.5 + t * (1.0 / 6.0 + t * (1.0 / 24.0 + t / 120.0)));
    return std::expm1(t) - t;
  };
  cf.p = [](double t) { return std::expm1(t); };
  cf.q = [](double s) { return std::log1p(s); };
  cf.n = [](double s) {
    s = std::fabs(s);
    if (s < 1e-3) return s * s * (0.5 - s * (1.0 / 6.0 - s * (1.0 / 12.0 - s / 20.0)));
    return (1.0 + s) * std::log1p(s) - s;
  };
  const ScalarFn m = cf.m;
  cf.m_inverse = [m](double y) { return bisect_increasing(m, y); };
  return cf;
}

double luxemburg_grid_search(const ScalarFn& m, const Fiber& fiber, const FiberVector& x, std::size_t points) {
  double top = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) top = std::max(top, std::fabs(x[i]));
  if (top == 0.0) return 0.0;
  const auto mod = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += fiber.weight(i) * m(std::fabs(x[i]) / lambda);
    return s;
  };
  double hi = top;
  while (mod(hi) > 1.0) hi *= 2.0;
  while (mod(0.5 * hi) <= 1.0) hi *= 0.5;
  const double lo = 0.5 * hi;
  const double step = (hi - lo) / static_cast<double>(points);
  for (std::size_t j = 1; j <= points; ++j) {
    const double lambda = lo + step * static_cast<double>(j);
    if (mod(lambda) <= 1.0) return lambda;
  }
  return hi;
}

double orlicz_dual_sweep(const ClosedForm& cf, const Fiber& fiber, const FiberVector& x) {
  const auto y_at = [&](double s, std::size_t i) {
    const double v = cf.p(s * std::fabs(x[i]));
    return x[i] < 0 ? -v : v;
  };
  const auto dual_modular = [&](double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += fiber.weight(i) * cf.n(y_at(s, i));
    return acc;
  };
  bool nonzero = false;
  for (std::size_t i = 0; i < x.size(); ++i) nonzero = nonzero || x[i] != 0.0;
  if (!nonzero) return 0.0;
  const double s = bisect_increasing(dual_modular, 1.0);
  double lo_s = s;
  // Step back until feasible so the reported value is attained by y in A(N).
  while (dual_modular(lo_s) > 1.0) lo_s = std::nextafter(lo_s, 0.0);
  double value = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) value += fiber.weight(i) * x[i] * y_at(lo_s, i);
  return value;
}

double orlicz_direction_search(const ClosedForm& cf, const Fiber& fiber, const FiberVector& x, int restarts,
                               std::uint64_t seed) {
  const std::size_t n = x.size();
  const auto value_along = [&](const std::vector<double>& u) {
    double dot = 0.0;
    double size = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dot += fiber.weight(i) * x[i] * u[i];
      size = std::max(size, std::fabs(u[i]));
    }
    if (size == 0.0 || dot <= 0.0) return 0.0;
    const auto g = [&](double r) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += fiber.weight(i) * cf.n(r * u[i]);
      return acc;
    };
    double r = bisect_increasing(g, 1.0);
    while (g(r) > 1.0) r = std::nextafter(r, 0.0);
    return r * dot;
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::pair<double, std::vector<double>>> starts;
  for (int k = 0; k < restarts; ++k) {
    std::vector<double> u(n);
    for (auto& v : u) v = gauss(rng);
    starts.emplace_back(value_along(u), std::move(u));
  }
  std::sort(starts.begin(), starts.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  double best = 0.0;
  const std::size_t polish = std::min<std::size_t>(starts.size(), 5);
  for (std::size_t s = 0; s < polish; ++s) {
    auto u = starts[s].second;
    double val = starts[s].first;
    double norm = 0.0;
    for (double v : u) norm = std::max(norm, std::fabs(v));
    double h = 0.5 * norm;
    while (h > 1e-12 * norm) {
      bool moved = false;
      for (std::size_t i = 0; i < n; ++i)
        for (double dir : {1.0, -1.0}) {
          auto trial = u;
          trial[i] += dir * h;
          const double tv = value_along(trial);
          if (tv > val) {
            val = tv;
            u = std::move(trial);
            moved = true;
          }
        }
      if (!moved) h *= 0.5;
    }
    best = std::max(best, val);
  }
  return best;
}

double l1_ratio_search(const Eigen::MatrixXd& t, const Fiber& fiber, int samples, std::uint64_t seed) {
  const auto n = t.rows();
  const auto l1 = [&](const Eigen::VectorXd& v) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += fiber.weight(static_cast<std::size_t>(i)) * std::fabs(v(i));
    return s;
  };
  double best = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, i);
    best = std::max(best, l1(t * e) / l1(e));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = u(rng);
    const double d = l1(x);
    if (d > 0.0) best = std::max(best, l1(t * x) / d);
  }
  return best;
}

double harmonic_number(std::int64_t n) {
  long double h = 0.0L;
  for (std::int64_t k = n; k >= 1; --k) h += 1.0L / static_cast<long double>(k);
  return static_cast<double>(h);
}

std::vector<double> direct_average(const Eigen::MatrixXd& t, const std::function<double(std::int64_t)>& b,
                                   const std::vector<double>& f, std::int64_t n) {
  const std::size_t d = f.size();
  std::vector<long double> g(f.begin(), f.end());
  std::vector<long double> next(d);
  std::vector<long double> s(d, 0.0L);
  for (std::int64_t k = 1; k < n; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      long double acc = 0.0L;
      for (std::size_t i = 0; i < d; ++i)
        acc += static_cast<long double>(t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))) * g[i];
      next[j] = acc;
    }
    g.swap(next);
    const long double bk = b(k);
    for (std::size_t j = 0; j < d; ++j) s[j] += bk * g[j];
  }
  std::vector<double> out(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = static_cast<double>(s[j] / static_cast<long double>(n));
  return out;
}

std::vector<double> eigen_average(const Eigen::MatrixXd& t, const std::vector<double>& f, std::int64_t n) {
  using cplx = std::complex<double>;
  const Eigen::EigenSolver<Eigen::MatrixXd> es(t);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen_average: eigensolver failed");
  const Eigen::MatrixXcd v = es.eigenvectors();
  const Eigen::VectorXcd lambda = es.eigenvalues();
  const Eigen::VectorXcd fv = Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size())).cast<cplx>();
  const Eigen::VectorXcd c = v.fullPivLu().solve(fv);
  Eigen::VectorXcd weighted(c.size());
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    const cplx l = lambda(j);
    cplx g;
    if (std::abs(1.0 - l) < 1e-12)
      g = static_cast<double>(n - 1);
    else
      g = l * (1.0 - std::pow(l, static_cast<double>(n - 1))) / (1.0 - l);
    weighted(j) = g * c(j);
  }
  const Eigen::VectorXcd r = v * weighted / static_cast<double>(n);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = r(static_cast<Eigen::Index>(i)).real();
  return out;
}

}  // namespace okl::oracle
