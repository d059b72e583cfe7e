#pragma once

#include <cstdint>
#include <vector>

namespace okl {

struct TrigTerm {
  double theta = 0.0;  ///< frequency in [0, 1)
  double a = 0.0;      ///< cosine coefficient
  double b = 0.0;      ///< sine coefficient
  friend bool operator==(const TrigTerm&, const TrigTerm&) = default;
};

/// psi(k) = sum_m a_m cos(2 pi theta_m k) + b_m sin(2 pi theta_m k).
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  /// Throws DomainError for frequencies outside [0, 1) or non-finite values.
  explicit TrigPolynomial(std::vector<TrigTerm> terms);

  const std::vector<TrigTerm>& terms() const noexcept { return terms_; }
  double operator()(std::int64_t k) const;
  /// sum_m |a_m| + |b_m|.
  double coefficient_bound() const;

  friend bool operator==(const TrigPolynomial&, const TrigPolynomial&) = default;

 private:
  std::vector<TrigTerm> terms_;
};

enum class WeightKind { kConstant, kTrig, kPerturbed };

/// A bounded real weight sequence b(k), k >= 1.
class WeightSequence {
 public:
  static constexpr std::int64_t kDefaultHorizon = 100000;

  static WeightSequence constant(double c, std::int64_t horizon = kDefaultHorizon);
  static WeightSequence trig(TrigPolynomial psi, std::int64_t horizon = kDefaultHorizon);
  /// psi(k) + delta / k.
  static WeightSequence perturbed(TrigPolynomial psi, double delta, std::int64_t horizon = kDefaultHorizon);

  WeightKind kind() const noexcept { return kind_; }
  double constant_value() const noexcept { return constant_; }
  const TrigPolynomial& polynomial() const noexcept { return psi_; }
  double delta() const noexcept { return delta_; }
  std::int64_t horizon() const noexcept { return horizon_; }

  /// sup_{1 <= k <= horizon} |b(k)|, cached at construction.
  double bound() const noexcept { return bound_; }

  /// b(k); throws DomainError for k <= 0.
  double operator()(std::int64_t k) const;

 private:
  WeightSequence() = default;
  void compute_bound();

  WeightKind kind_ = WeightKind::kConstant;
  double constant_ = 0.0;
  TrigPolynomial psi_;
  double delta_ = 0.0;
  std::int64_t horizon_ = kDefaultHorizon;
  double bound_ = 0.0;
};

double eval_weight(const WeightSequence& w, std::int64_t k);

/// (1/N) sum_{k=1}^N |b(k) - psi(k)|; throws DomainError for N < 1.
double besicovich_defect(const WeightSequence& w, const TrigPolynomial& psi, std::int64_t n);

struct DefectSchedule {
  std::vector<std::int64_t> horizons;
  std::vector<double> defects;
  bool nonincreasing = false;  ///< defect trend along the schedule (1e-12 slack)
};

/// Defects on the geometric schedule n0, 2 n0, 4 n0, ... <= n_max.
DefectSchedule defect_schedule(const WeightSequence& w, const TrigPolynomial& psi, std::int64_t n0,
                               std::int64_t n_max);

struct TrigFit {
  TrigPolynomial polynomial;
  double defect = 0.0;  ///< L1 defect of the fit at the fitting horizon
};

/// Least-squares fit of coefficients at the given frequencies over k = 1..N
/// by normal equations. Throws UsageError for an empty frequency list,
/// N < 2 |freqs|, or a rank-deficient design (repeated or aliased
/// frequencies).
TrigFit fit_trig_poly(const WeightSequence& w, const std::vector<double>& freqs, std::int64_t n);

}  // namespace okl
