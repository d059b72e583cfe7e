#pragma once

#include <string>
#include <vector>

namespace okl {

/// A knot of a piecewise-linear density. Two consecutive knots with equal
/// `t` encode a jump of the density at that point.
struct DensityKnot {
  double t = 0.0;
  double p = 0.0;
  friend bool operator==(const DensityKnot&, const DensityKnot&) = default;
};

enum class NFunctionKind {
  kPower,         ///< c |t|^r, r > 1
  kExpType,       ///< e^|t| - |t| - 1
  kExpConjugate,  ///< (1+|t|) ln(1+|t|) - |t|, the complement of kExpType
  kTabulated,     ///< piecewise-linear density with a linear tail
};

/// An even convex Young function M(t) = \int_0^{|t|} p(s) ds, stored by its
/// nondecreasing right-continuous density p.
///
/// Tabulated densities are linear between knots and continue beyond the last
/// knot with slope `tail_slope`. Knots may repeat a `t` value once, which
/// makes p jump there (the right-continuous value is the later knot). This is
/// what makes the generalized inverse of a tabulated density tabulated again.
class NFunction {
 public:
  static NFunction power(double exponent, double scale = 1.0);
  static NFunction exp_type();
  static NFunction exp_conjugate();
  /// Throws UsageError unless the knots start at (0, 0), are finite,
  /// have nondecreasing t (at most two knots per t) and tail_slope > 0.
  /// Monotonicity of p is not enforced here; check_axioms reports it.
  static NFunction tabulated(std::vector<DensityKnot> knots, double tail_slope);

  NFunctionKind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return exponent_; }
  double scale() const noexcept { return scale_; }
  const std::vector<DensityKnot>& knots() const noexcept { return knots_; }
  double tail_slope() const noexcept { return tail_slope_; }

  /// M(t). Throws DomainError for non-finite t.
  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  /// Right-continuous p(t), t >= 0.
  double density(double t) const;
  /// Left limit p(t-), t > 0; equals p(0) at t = 0.
  double density_left(double t) const;

  /// Smallest t >= 0 with M(t) >= y; y >= 0.
  double inverse(double y) const;

  /// The complementary N-function, built from q(s) = sup{t : p(t) <= s}.
  NFunction complement() const;

  /// Characteristic length used to scale numerical probes: 1 for closed
  /// forms, the last knot for tabulated densities.
  double probe_scale() const;

  /// Catalog spec string (`power:r=..,c=..`, `exp_type`, `exp_conjugate`)
  /// or `tabulated` for table-backed functions.
  std::string describe() const;

  /// Cached result of check_axioms(*this).all_pass().
  bool valid() const noexcept { return valid_; }

 private:
  NFunction() = default;
  void finalize();
  double tab_eval(double t) const;

  NFunctionKind kind_ = NFunctionKind::kPower;
  double exponent_ = 2.0;
  double scale_ = 1.0;
  std::vector<DensityKnot> knots_;
  std::vector<double> cumulative_;  // M at each knot
  double tail_slope_ = 0.0;
  bool valid_ = false;
};

struct ProbeRecord {
  double t = 0.0;
  double ratio = 0.0;  ///< M(t)/t at the probe
};

struct AxiomReport {
  bool density_monotone = false;
  bool density_positive_beyond_zero = false;
  bool small_limit = false;   ///< M(t)/t < 1e-6 reached on the small-t ladder
  bool large_limit = false;   ///< M(t)/t > 1e6 reached on the large-t ladder
  bool convex = false;
  bool even = false;
  bool strictly_convex_somewhere = false;
  ProbeRecord small_probe;
  ProbeRecord large_probe;

  bool all_pass() const {
    return density_monotone && density_positive_beyond_zero && small_limit &&
           large_limit && convex && even;
  }
};

AxiomReport check_axioms(const NFunction& m);

/// M(u) + N(v) - u v with N = complement(M). Throws DomainError for negative
/// inputs.
double young_gap(const NFunction& m, double u, double v);
/// Same, with a precomputed complement.
double young_gap(const NFunction& m, const NFunction& n, double u, double v);

}  // namespace okl
