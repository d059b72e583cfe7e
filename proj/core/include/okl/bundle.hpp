#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "okl/measure.hpp"
#include "okl/nfunction.hpp"

namespace okl {

/// Finite base space: atoms omega_1..omega_B with strictly positive weights.
class BaseSpace {
 public:
  explicit BaseSpace(std::vector<double> weights);
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(std::size_t w) const { return weights_[w]; }

 private:
  std::vector<double> weights_;
};

/// One real per base atom: the values of L0(Omega)-valued measures and norms.
using BaseVector = std::vector<double>;

/// A base space with one finite fiber per base atom.
class Bundle {
 public:
  /// Throws UsageError when fiber count differs from base atom count.
  Bundle(BaseSpace base, std::vector<Fiber> fibers);

  const BaseSpace& base() const noexcept { return base_; }
  std::size_t base_size() const noexcept { return fibers_.size(); }
  const Fiber& fiber(std::size_t w) const { return fibers_.at(w); }
  const std::vector<Fiber>& fibers() const noexcept { return fibers_; }

  /// The one-fiber bundle over base atom w.
  Bundle restrict_to(std::size_t w) const;

 private:
  BaseSpace base_;
  std::vector<Fiber> fibers_;
};

/// A measurable section: one FiberVector per base atom.
class Section {
 public:
  Section() = default;
  explicit Section(std::vector<FiberVector> parts) : parts_(std::move(parts)) {}
  static Section zeros(const Bundle& bundle);
  static Section constant(const Bundle& bundle, double c);

  std::size_t size() const noexcept { return parts_.size(); }
  const FiberVector& operator[](std::size_t w) const { return parts_[w]; }
  FiberVector& operator[](std::size_t w) { return parts_[w]; }
  const std::vector<FiberVector>& parts() const noexcept { return parts_; }

  Section abs() const;
  Section scaled(double c) const;
  double max_abs() const;

  Section& operator+=(const Section& other);
  Section& operator-=(const Section& other);
  friend Section operator+(Section a, const Section& b) { return a += b; }
  friend Section operator-(Section a, const Section& b) { return a -= b; }
  friend bool operator==(const Section&, const Section&) = default;

 private:
  std::vector<FiberVector> parts_;
};

/// One FiberIdempotent per base atom.
class IdempotentSection {
 public:
  IdempotentSection() = default;
  explicit IdempotentSection(std::vector<FiberIdempotent> parts) : parts_(std::move(parts)) {}
  static IdempotentSection top(const Bundle& bundle);
  static IdempotentSection bottom(const Bundle& bundle);

  std::size_t size() const noexcept { return parts_.size(); }
  const FiberIdempotent& operator[](std::size_t w) const { return parts_[w]; }

  IdempotentSection join(const IdempotentSection& other) const;
  IdempotentSection meet(const IdempotentSection& other) const;
  /// g e: keeps e(omega) where g(omega) = 1 and replaces it by bottom elsewhere.
  IdempotentSection restricted_by(const BaseVector& g) const;

  friend bool operator==(const IdempotentSection&, const IdempotentSection&) = default;

 private:
  std::vector<FiberIdempotent> parts_;
};

void require_bound(const Bundle& bundle, const Section& f, const char* what);
void require_bound(const Bundle& bundle, const IdempotentSection& e, const char* what);

/// omega -> mu_omega(e(omega)).
BaseVector measure_of(const Bundle& bundle, const IdempotentSection& e);

/// max_omega |mu(g e)(omega) - g(omega) mu(e)(omega)| for a 0/1-valued g.
/// Throws DomainError if g is not 0/1-valued.
double module_property_check(const Bundle& bundle, const BaseVector& g, const IdempotentSection& e);

enum class NormKind { kLuxemburg, kOrlicz };

/// omega -> the chosen fiber norm of f(omega).
BaseVector section_norm(const NFunction& m, const Bundle& bundle, const Section& f, NormKind kind);

/// Atomwise max / min over a nonempty family bound to one bundle.
Section section_sup(std::span<const Section> fs);
Section section_inf(std::span<const Section> fs);

struct OConvergenceReport {
  /// d_n = sup_{m >= n} |f_m - limit| for n = tail_start .. end.
  std::vector<Section> envelopes;
  bool envelope_nonincreasing = false;
  double final_envelope_max = 0.0;
  bool converged = false;
};

/// Finite-model order convergence: the tail sup-envelope of |f_n - limit|
/// must decrease monotonically, and its last value must be within tol.
OConvergenceReport o_converges(std::span<const Section> trace, const Section& limit,
                               std::size_t tail_start, double tol);

/// The single-base-atom restriction of a section.
Section restrict_section(const Section& f, std::size_t w);

}  // namespace okl
