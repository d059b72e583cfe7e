#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "okl/bundle.hpp"
#include "okl/nfunction.hpp"

namespace okl {

/// Nonnegative n x n matrix acting by (Tx)_j = sum_i T_ji x_i.
class FiberOperator {
 public:
  /// Throws UsageError for non-square, non-finite or negative matrices.
  explicit FiberOperator(Eigen::MatrixXd matrix);
  static FiberOperator identity(std::size_t n) {
    return FiberOperator(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
  }

  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }

  FiberVector apply(const FiberVector& x) const;

 private:
  Eigen::MatrixXd matrix_;
};

/// A fiberwise positive operator on a bundle together with its recorded
/// positive fixed point h.
class BundleOperator {
 public:
  /// Throws UsageError unless there is one operator per base atom and h is
  /// nonnegative with h(omega) != 0 everywhere. Th = h is not enforced here;
  /// verify_conditions measures it.
  BundleOperator(std::vector<FiberOperator> parts, Section fixed_point);
  /// Fixed point h = 1.
  explicit BundleOperator(std::vector<FiberOperator> parts);

  std::size_t base_size() const noexcept { return parts_.size(); }
  const FiberOperator& fiber_operator(std::size_t w) const { return parts_.at(w); }
  const std::vector<FiberOperator>& parts() const noexcept { return parts_; }
  const Section& fixed_point() const noexcept { return fixed_point_; }

 private:
  std::vector<FiberOperator> parts_;
  Section fixed_point_;
};

Section apply(const BundleOperator& t, const Section& f);
/// T^k f; throws DomainError for k < 0.
Section power_apply(const BundleOperator& t, const Section& f, long k);

/// max_i (1/mu_i) sum_j mu_j T_ji, the exact L1 -> L1 norm of a positive
/// operator on an atomic space.
double l1_operator_norm(const FiberOperator& t, const Fiber& fiber);

struct FiberConditionReport {
  std::size_t omega = 0;
  double l1_norm = 0.0;
  bool l1_contraction = false;        ///< (ii): l1_norm <= 1 + 1e-12
  double fixed_point_residual = 0.0;  ///< (iii): ||T h - h||_inf
  bool fixed_point = false;           ///< residual <= 1e-10 and h != 0
  double worst_modular_excess = 0.0;  ///< (i): max of modular(|Tf|) - modular(|f|)
  bool modular_contraction = false;
  double worst_luxemburg_excess = 0.0;
  bool luxemburg_contraction = false;
  double worst_linf_excess = 0.0;
  bool linf_contraction = false;
  std::size_t samples = 0;
  /// Condition (i) and the norm surrogates are sampled, never proven.
  bool sampled_evidence_only = true;

  bool passed() const {
    return l1_contraction && fixed_point && modular_contraction && luxemburg_contraction &&
           linf_contraction;
  }
};

struct ConditionReport {
  std::vector<FiberConditionReport> fibers;
  bool admissible() const;
};

FiberConditionReport fiber_condition_report(std::size_t omega, const FiberOperator& t, const Fiber& fiber,
                                            const FiberVector& h, const NFunction& m,
                                            std::size_t sample_count, std::uint64_t seed);

/// Per-fiber checks of the three admissibility conditions; fiber omega uses
/// the sub-seed sub_seed(seed, omega), so each entry is reproducible from
/// decompose() alone.
ConditionReport verify_conditions(const BundleOperator& t, const Bundle& bundle, const NFunction& m,
                                  std::size_t sample_count, std::uint64_t seed);

std::vector<std::pair<std::size_t, FiberOperator>> decompose(const BundleOperator& t);

/// A mu-doubly-stochastic operator: T 1 = 1 and sum_j mu_j T_ji = mu_i.
/// Random positive matrix blended with the identity by `mixing`, then
/// mu-weighted Sinkhorn balancing to residual < 1e-12 (cap 1e5 sweeps).
/// Throws DomainError for mixing outside (0, 1] and ConvergenceError when the
/// cap is hit.
FiberOperator generate_admissible(const Fiber& fiber, std::uint64_t seed, double mixing);

}  // namespace okl
