#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace okl {

/// A finite measure space with strictly positive atom weights. The Boolean
/// algebra of the fiber is the power set of its atoms.
class Fiber {
 public:
  /// Throws UsageError unless weights are nonempty, finite and > 0.
  explicit Fiber(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double total_mass() const noexcept { return total_; }

  friend bool operator==(const Fiber& a, const Fiber& b) { return a.weights_ == b.weights_; }

 private:
  std::vector<double> weights_;
  double total_ = 0.0;
};

/// Real function on the atoms of a fiber.
class FiberVector {
 public:
  FiberVector() = default;
  explicit FiberVector(std::vector<double> values);
  static FiberVector zeros(std::size_t n) { return FiberVector(std::vector<double>(n, 0.0)); }
  static FiberVector constant(std::size_t n, double c) { return FiberVector(std::vector<double>(n, c)); }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  const std::vector<double>& data() const noexcept { return values_; }

  FiberVector abs() const;
  FiberVector scaled(double c) const;
  double max_abs() const;

  FiberVector& operator+=(const FiberVector& other);
  FiberVector& operator-=(const FiberVector& other);
  friend FiberVector operator+(FiberVector a, const FiberVector& b) { return a += b; }
  friend FiberVector operator-(FiberVector a, const FiberVector& b) { return a -= b; }
  friend bool operator==(const FiberVector&, const FiberVector&) = default;

 private:
  std::vector<double> values_;
};

/// An idempotent of the fiber algebra: a subset of atoms.
class FiberIdempotent {
 public:
  FiberIdempotent() = default;
  explicit FiberIdempotent(std::vector<bool> members) : members_(std::move(members)) {}
  static FiberIdempotent top(std::size_t n) { return FiberIdempotent(std::vector<bool>(n, true)); }
  static FiberIdempotent bottom(std::size_t n) { return FiberIdempotent(std::vector<bool>(n, false)); }
  /// Bit i of `mask` selects atom i.
  static FiberIdempotent from_mask(std::size_t n, unsigned long long mask);

  std::size_t size() const noexcept { return members_.size(); }
  bool contains(std::size_t i) const { return members_[i]; }

  FiberIdempotent join(const FiberIdempotent& other) const;
  FiberIdempotent meet(const FiberIdempotent& other) const;
  FiberIdempotent complement() const;
  FiberIdempotent symmetric_difference(const FiberIdempotent& other) const;
  FiberVector indicator() const;

  friend bool operator==(const FiberIdempotent&, const FiberIdempotent&) = default;

 private:
  std::vector<bool> members_;
};

/// Throws UsageError when `n` does not match the fiber's atom count.
void require_bound(const Fiber& fiber, std::size_t n, const char* what);

double integrate(const Fiber& fiber, const FiberVector& x);
double measure(const Fiber& fiber, const FiberIdempotent& e);

/// mu(e xor g).
double idempotent_metric(const Fiber& fiber, const FiberIdempotent& e, const FiberIdempotent& g);
/// \int |f-g| / (1+|f-g|) dmu.
double rho_metric(const Fiber& fiber, const FiberVector& f, const FiberVector& g);

double linf_norm(const Fiber& fiber, const FiberVector& x);
/// (sum mu_i |x_i|^p)^(1/p); throws DomainError for p < 1.
double lp_norm(const Fiber& fiber, const FiberVector& x, double p);

}  // namespace okl
