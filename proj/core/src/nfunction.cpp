#include "okl/nfunction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "okl/errors.hpp"

namespace okl {
namespace {

// e^t - t - 1 for t >= 0, accurate near zero.
double exp_type_value(double t) {
  if (t < 1e-3) {
    const double t2 = t * t;
    return t2 * (0.5 + t * (1.0 / 6.0 + t * (1.0 / 24.0 + t * (1.0 / 120.0))));
  }
  return std::expm1(t) - t;
}

// (1+s) ln(1+s) - s for s >= 0; series sum_{k>=2} (-1)^k s^k / (k(k-1)).
double exp_conjugate_value(double s) {
  if (s < 1e-3) {
    const double s2 = s * s;
    return s2 * (0.5 + s * (-1.0 / 6.0 + s * (1.0 / 12.0 + s * (-1.0 / 20.0))));
  }
  return (1.0 + s) * std::log1p(s) - s;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Drops exact duplicate points and collapses runs of three or more knots
// sharing a t value to the first and last of the run.
std::vector<DensityKnot> normalize_knots(const std::vector<DensityKnot>& in) {
  std::vector<DensityKnot> out;
  out.reserve(in.size());
  for (const auto& k : in) {
    if (!out.empty() && out.back() == k) continue;
    if (out.size() >= 2 && out[out.size() - 1].t == k.t &&
        out[out.size() - 2].t == k.t) {
      out.back() = k;
      continue;
    }
    out.push_back(k);
  }
  return out;
}

}  // namespace

NFunction NFunction::power(double exponent, double scale) {
  if (!(exponent > 1.0) || !std::isfinite(exponent))
    throw UsageError("power N-function requires exponent r > 1");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw UsageError("power N-function requires scale c > 0");
  NFunction m;
  m.kind_ = NFunctionKind::kPower;
  m.exponent_ = exponent;
  m.scale_ = scale;
  m.finalize();
  return m;
}

NFunction NFunction::exp_type() {
  NFunction m;
  m.kind_ = NFunctionKind::kExpType;
  m.finalize();
  return m;
}

NFunction NFunction::exp_conjugate() {
  NFunction m;
  m.kind_ = NFunctionKind::kExpConjugate;
  m.finalize();
  return m;
}

NFunction NFunction::tabulated(std::vector<DensityKnot> knots, double tail_slope) {
  if (knots.empty()) throw UsageError("tabulated density needs at least one knot");
  if (knots.front().t != 0.0 || knots.front().p != 0.0)
    throw UsageError("tabulated density must start at knot (0, 0)");
  if (!(tail_slope > 0.0) || !std::isfinite(tail_slope))
    throw UsageError("tabulated density needs a positive finite tail_slope");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].t) || !std::isfinite(knots[i].p))
      throw UsageError("tabulated density knots must be finite");
    if (i > 0 && knots[i].t < knots[i - 1].t)
      throw UsageError("tabulated density knots must have nondecreasing t");
    if (i > 1 && knots[i].t == knots[i - 1].t && knots[i].t == knots[i - 2].t)
      throw UsageError("at most two tabulated knots may share a t value");
  }
  NFunction m;
  m.kind_ = NFunctionKind::kTabulated;
  m.knots_ = std::move(knots);
  m.tail_slope_ = tail_slope;
  m.finalize();
  return m;
}

void NFunction::finalize() {
  if (kind_ == NFunctionKind::kTabulated) {
    cumulative_.assign(knots_.size(), 0.0);
    for (std::size_t i = 1; i < knots_.size(); ++i) {
      const double w = knots_[i].t - knots_[i - 1].t;
      cumulative_[i] = cumulative_[i - 1] + 0.5 * w * (knots_[i - 1].p + knots_[i].p);
    }
  }
  valid_ = check_axioms(*this).all_pass();
}

double NFunction::tab_eval(double t) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                   [](double v, const DensityKnot& k) { return v < k.t; });
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  const double d = t - knots_[i].t;
  if (i + 1 == knots_.size())
    return cumulative_[i] + d * (knots_[i].p + 0.5 * tail_slope_ * d);
  const double slope = (knots_[i + 1].p - knots_[i].p) / (knots_[i + 1].t - knots_[i].t);
  return cumulative_[i] + d * (knots_[i].p + 0.5 * slope * d);
}

double NFunction::eval(double t) const {
  if (!std::isfinite(t)) throw DomainError("N-function argument must be finite");
  const double a = std::fabs(t);
  if (a == 0.0) return 0.0;
  switch (kind_) {
    case NFunctionKind::kPower:
      return scale_ * std::pow(a, exponent_);
    case NFunctionKind::kExpType:
      return exp_type_value(a);
    case NFunctionKind::kExpConjugate:
      return exp_conjugate_value(a);
    case NFunctionKind::kTabulated:
      return tab_eval(a);
  }
  return 0.0;
}

double NFunction::density(double t) const {
  if (!(t >= 0.0)) throw DomainError("density argument must be >= 0");
  switch (kind_) {
    case NFunctionKind::kPower:
      return t == 0.0 ? 0.0 : scale_ * exponent_ * std::pow(t, exponent_ - 1.0);
    case NFunctionKind::kExpType:
      return std::expm1(t);
    case NFunctionKind::kExpConjugate:
      return std::log1p(t);
    case NFunctionKind::kTabulated: {
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                       [](double v, const DensityKnot& k) { return v < k.t; });
      const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
      const double d = t - knots_[i].t;
      if (i + 1 == knots_.size()) return knots_[i].p + tail_slope_ * d;
      const double slope = (knots_[i + 1].p - knots_[i].p) / (knots_[i + 1].t - knots_[i].t);
      return knots_[i].p + slope * d;
    }
  }
  return 0.0;
}

double NFunction::density_left(double t) const {
  if (!(t >= 0.0)) throw DomainError("density argument must be >= 0");
  if (kind_ != NFunctionKind::kTabulated || t == 0.0) return density(t);
  // First knot with knot.t >= t; the left limit lives on the piece ending there.
  const auto it = std::lower_bound(knots_.begin(), knots_.end(), t,
                                   [](const DensityKnot& k, double v) { return k.t < v; });
  if (it == knots_.end()) return density(t);
  const std::size_t j = static_cast<std::size_t>(it - knots_.begin());
  if (knots_[j].t != t) return density(t);
  return knots_[j].p;
}

double NFunction::inverse(double y) const {
  if (!(y >= 0.0) || !std::isfinite(y)) throw DomainError("inverse argument must be finite and >= 0");
  if (y == 0.0) return 0.0;
  if (kind_ == NFunctionKind::kPower) return std::pow(y / scale_, 1.0 / exponent_);
  double lo = 0.0;
  double hi = probe_scale();
  while (eval(hi) < y) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) < y)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

NFunction NFunction::complement() const {
  if (!valid_) throw DomainError("complement requires an N-function passing check_axioms");
  switch (kind_) {
    case NFunctionKind::kPower: {
      const double r = exponent_;
      const double rc = r / (r - 1.0);
      const double cc = (r - 1.0) / r * std::pow(scale_ * r, -1.0 / (r - 1.0));
      return power(rc, cc);
    }
    case NFunctionKind::kExpType:
      return exp_conjugate();
    case NFunctionKind::kExpConjugate:
      return exp_type();
    case NFunctionKind::kTabulated: {
      // Reflect the monotone graph of p across the diagonal: flat pieces of p
      // become jumps of q and jumps of p become flat pieces of q.
      std::vector<DensityKnot> swapped;
      swapped.reserve(knots_.size());
      for (const auto& k : knots_) swapped.push_back({k.p, k.t});
      return tabulated(normalize_knots(swapped), 1.0 / tail_slope_);
    }
  }
  return *this;
}

double NFunction::probe_scale() const {
  if (kind_ != NFunctionKind::kTabulated) return 1.0;
  const double last = knots_.back().t;
  return last > 0.0 ? last : 1.0;
}

std::string NFunction::describe() const {
  switch (kind_) {
    case NFunctionKind::kPower:
      return "power:r=" + fmt17(exponent_) + ",c=" + fmt17(scale_);
    case NFunctionKind::kExpType:
      return "exp_type";
    case NFunctionKind::kExpConjugate:
      return "exp_conjugate";
    case NFunctionKind::kTabulated:
      return "tabulated";
  }
  return "";
}

AxiomReport check_axioms(const NFunction& m) {
  AxiomReport r;
  const double scale = m.probe_scale();

  if (m.kind() == NFunctionKind::kTabulated) {
    const auto& k = m.knots();
    bool mono = m.density(0.0) == 0.0;
    for (std::size_t i = 1; i < k.size(); ++i) mono = mono && k[i].p >= k[i - 1].p;
    r.density_monotone = mono;

    // t+ = inf{t : p(t) > 0} must be 0.
    std::size_t first_pos = k.size();
    for (std::size_t i = 0; i < k.size(); ++i)
      if (k[i].p > 0.0) {
        first_pos = i;
        break;
      }
    if (first_pos == k.size())
      r.density_positive_beyond_zero = k.back().t == 0.0;
    else
      r.density_positive_beyond_zero = k[first_pos - 1].t == 0.0;

    bool strict = m.tail_slope() > 0.0;
    for (std::size_t i = 1; i < k.size(); ++i)
      strict = strict || (k[i].t > k[i - 1].t && k[i].p > k[i - 1].p);
    r.strictly_convex_somewhere = strict;
  } else {
    bool mono = m.density(0.0) == 0.0;
    double prev = 0.0;
    for (int i = -40; i <= 20; ++i) {
      const double p = m.density(std::pow(2.0, i));
      mono = mono && p >= prev;
      prev = p;
    }
    r.density_monotone = mono;
    // Closed forms have p(t) > 0 for every t > 0.
    r.density_positive_beyond_zero = true;
    r.strictly_convex_somewhere = true;
  }

  // Limit probes: ladders of decades starting at 1e-8 and 1e8 times the scale.
  for (int k = 0; k <= 40; ++k) {
    const double t = scale * 1e-8 * std::pow(10.0, -k);
    r.small_probe = {t, m.eval(t) / t};
    if (r.small_probe.ratio < 1e-6) {
      r.small_limit = true;
      break;
    }
  }
  for (int k = 0; k <= 40; ++k) {
    const double t = scale * 1e8 * std::pow(10.0, k);
    r.large_probe = {t, m.eval(t) / t};
    if (r.large_probe.ratio > 1e6) {
      r.large_limit = true;
      break;
    }
  }
  // (1+t)ln(1+t) - t grows like t ln t, so M(t)/t stays below any fixed
  // threshold across the double range; the limit is known in closed form.
  if (m.kind() == NFunctionKind::kExpConjugate) r.large_limit = true;

  // Midpoint convexity and evenness on a symmetric geometric grid.
  std::vector<double> grid;
  for (int i = 0; i <= 120; ++i) {
    const double t = scale * 1e-4 * std::pow(10.0, 6.0 * i / 120.0);
    grid.push_back(t);
    grid.push_back(-t);
  }
  grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());
  bool convex = true;
  bool even = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    even = even && m.eval(grid[i]) == m.eval(-grid[i]);
    for (std::size_t step : {1u, 3u, 17u, 61u}) {
      if (i + step >= grid.size()) continue;
      const double a = grid[i];
      const double b = grid[i + step];
      const double lhs = m.eval(0.5 * (a + b));
      const double rhs = 0.5 * (m.eval(a) + m.eval(b));
      if (lhs > rhs + 1e-12 * std::max(1.0, std::fabs(rhs))) convex = false;
    }
  }
  r.convex = convex;
  r.even = even;
  return r;
}

double young_gap(const NFunction& m, const NFunction& n, double u, double v) {
  if (!(u >= 0.0) || !(v >= 0.0)) throw DomainError("young_gap requires u, v >= 0");
  return m.eval(u) + n.eval(v) - u * v;
}

double young_gap(const NFunction& m, double u, double v) {
  return young_gap(m, m.complement(), u, v);
}

}  // namespace okl
