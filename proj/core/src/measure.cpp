#include "okl/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "okl/errors.hpp"

namespace okl {

Fiber::Fiber(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw UsageError("fiber needs at least one atom");
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw UsageError("fiber weights must be finite and > 0");
    total_ += w;
  }
}

FiberVector::FiberVector(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("fiber vector values must be finite");
}

FiberVector FiberVector::abs() const {
  FiberVector r = *this;
  for (double& v : r.values_) v = std::fabs(v);
  return r;
}

FiberVector FiberVector::scaled(double c) const {
  FiberVector r = *this;
  for (double& v : r.values_) v *= c;
  return r;
}

double FiberVector::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

FiberVector& FiberVector::operator+=(const FiberVector& other) {
  if (other.size() != size()) throw UsageError("fiber vector size mismatch");
  for (std::size_t i = 0; i < size(); ++i) values_[i] += other.values_[i];
  return *this;
}

FiberVector& FiberVector::operator-=(const FiberVector& other) {
  if (other.size() != size()) throw UsageError("fiber vector size mismatch");
  for (std::size_t i = 0; i < size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

FiberIdempotent FiberIdempotent::from_mask(std::size_t n, unsigned long long mask) {
  std::vector<bool> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = (mask >> i) & 1ULL;
  return FiberIdempotent(std::move(m));
}

FiberIdempotent FiberIdempotent::join(const FiberIdempotent& other) const {
  if (other.size() != size()) throw UsageError("idempotent size mismatch");
  std::vector<bool> m(size());
  for (std::size_t i = 0; i < size(); ++i) m[i] = members_[i] || other.members_[i];
  return FiberIdempotent(std::move(m));
}

FiberIdempotent FiberIdempotent::meet(const FiberIdempotent& other) const {
  if (other.size() != size()) throw UsageError("idempotent size mismatch");
  std::vector<bool> m(size());
  for (std::size_t i = 0; i < size(); ++i) m[i] = members_[i] && other.members_[i];
  return FiberIdempotent(std::move(m));
}

FiberIdempotent FiberIdempotent::complement() const {
  std::vector<bool> m(size());
  for (std::size_t i = 0; i < size(); ++i) m[i] = !members_[i];
  return FiberIdempotent(std::move(m));
}

FiberIdempotent FiberIdempotent::symmetric_difference(const FiberIdempotent& other) const {
  if (other.size() != size()) throw UsageError("idempotent size mismatch");
  std::vector<bool> m(size());
  for (std::size_t i = 0; i < size(); ++i) m[i] = members_[i] != other.members_[i];
  return FiberIdempotent(std::move(m));
}

FiberVector FiberIdempotent::indicator() const {
  std::vector<double> v(size());
  for (std::size_t i = 0; i < size(); ++i) v[i] = members_[i] ? 1.0 : 0.0;
  return FiberVector(std::move(v));
}

void require_bound(const Fiber& fiber, std::size_t n, const char* what) {
  if (n != fiber.size())
    throw UsageError(std::string(what) + ": bound to a fiber with " + std::to_string(n) +
                     " atoms, expected " + std::to_string(fiber.size()));
}

double integrate(const Fiber& fiber, const FiberVector& x) {
  require_bound(fiber, x.size(), "integrate");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += fiber.weight(i) * x[i];
  return s;
}

double measure(const Fiber& fiber, const FiberIdempotent& e) {
  require_bound(fiber, e.size(), "measure");
  double s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e.contains(i)) s += fiber.weight(i);
  return s;
}

double idempotent_metric(const Fiber& fiber, const FiberIdempotent& e, const FiberIdempotent& g) {
  require_bound(fiber, e.size(), "idempotent_metric");
  require_bound(fiber, g.size(), "idempotent_metric");
  return measure(fiber, e.symmetric_difference(g));
}

double rho_metric(const Fiber& fiber, const FiberVector& f, const FiberVector& g) {
  require_bound(fiber, f.size(), "rho_metric");
  require_bound(fiber, g.size(), "rho_metric");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = std::fabs(f[i] - g[i]);
    s += fiber.weight(i) * (d / (1.0 + d));
  }
  return s;
}

double linf_norm(const Fiber& fiber, const FiberVector& x) {
  require_bound(fiber, x.size(), "linf_norm");
  return x.max_abs();
}

double lp_norm(const Fiber& fiber, const FiberVector& x, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
  require_bound(fiber, x.size(), "lp_norm");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += fiber.weight(i) * std::pow(std::fabs(x[i]), p);
  return p == 1.0 ? s : std::pow(s, 1.0 / p);
}

}  // namespace okl
