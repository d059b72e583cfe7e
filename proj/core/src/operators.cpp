#include "okl/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "okl/errors.hpp"
#include "okl/orlicz.hpp"
#include "okl/rng.hpp"

namespace okl {

FiberOperator::FiberOperator(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
    throw UsageError("fiber operator must be a nonempty square matrix");
  for (Eigen::Index j = 0; j < matrix_.rows(); ++j)
    for (Eigen::Index i = 0; i < matrix_.cols(); ++i) {
      const double v = matrix_(j, i);
      if (!std::isfinite(v) || v < 0.0) throw UsageError("fiber operator entries must be finite and >= 0");
    }
}

FiberVector FiberOperator::apply(const FiberVector& x) const {
  if (x.size() != size()) throw UsageError("fiber operator applied to a vector of the wrong size");
  std::vector<double> out(x.size());
  Eigen::Map<const Eigen::VectorXd> in(x.data().data(), static_cast<Eigen::Index>(x.size()));
  Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())).noalias() = matrix_ * in;
  return FiberVector(std::move(out));
}

namespace {

Section unit_fixed_point(const std::vector<FiberOperator>& parts) {
  std::vector<FiberVector> h;
  for (const auto& p : parts) h.push_back(FiberVector::constant(p.size(), 1.0));
  return Section(std::move(h));
}

}  // namespace

BundleOperator::BundleOperator(std::vector<FiberOperator> parts, Section fixed_point)
    : parts_(std::move(parts)), fixed_point_(std::move(fixed_point)) {
  if (parts_.empty()) throw UsageError("bundle operator needs at least one fiber operator");
  if (fixed_point_.size() != parts_.size()) throw UsageError("fixed point must have one part per base atom");
  for (std::size_t w = 0; w < parts_.size(); ++w) {
    const FiberVector& h = fixed_point_[w];
    if (h.size() != parts_[w].size()) throw UsageError("fixed point part size differs from its operator");
    bool nonzero = false;
    for (double v : h.values()) {
      if (v < 0.0) throw UsageError("fixed point must be nonnegative");
      nonzero = nonzero || v > 0.0;
    }
    if (!nonzero) throw UsageError("fixed point must be nonzero on every fiber");
  }
}

BundleOperator::BundleOperator(std::vector<FiberOperator> parts)
    : BundleOperator(parts, unit_fixed_point(parts)) {}

Section apply(const BundleOperator& t, const Section& f) {
  if (f.size() != t.base_size()) throw UsageError("apply: section base size mismatch");
  std::vector<FiberVector> out;
  out.reserve(f.size());
  for (std::size_t w = 0; w < f.size(); ++w) out.push_back(t.fiber_operator(w).apply(f[w]));
  return Section(std::move(out));
}

Section power_apply(const BundleOperator& t, const Section& f, long k) {
  if (k < 0) throw DomainError("power_apply: k must be >= 0");
  Section g = f;
  for (long i = 0; i < k; ++i) g = apply(t, g);
  return g;
}

double l1_operator_norm(const FiberOperator& t, const Fiber& fiber) {
  require_bound(fiber, t.size(), "l1_operator_norm");
  const auto& a = t.matrix();
  double best = 0.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    double col = 0.0;
    for (Eigen::Index j = 0; j < a.rows(); ++j) col += fiber.weight(static_cast<std::size_t>(j)) * a(j, i);
    best = std::max(best, col / fiber.weight(static_cast<std::size_t>(i)));
  }
  return best;
}

bool ConditionReport::admissible() const {
  return std::all_of(fibers.begin(), fibers.end(), [](const auto& f) { return f.passed(); });
}

FiberConditionReport fiber_condition_report(std::size_t omega, const FiberOperator& t, const Fiber& fiber,
                                            const FiberVector& h, const NFunction& m,
                                            std::size_t sample_count, std::uint64_t seed) {
  require_bound(fiber, t.size(), "fiber_condition_report");
  require_bound(fiber, h.size(), "fiber_condition_report");
  FiberConditionReport r;
  r.omega = omega;
  r.samples = sample_count;

  r.l1_norm = l1_operator_norm(t, fiber);
  r.l1_contraction = r.l1_norm <= 1.0 + 1e-12;

  r.fixed_point_residual = (t.apply(h) - h).max_abs();
  r.fixed_point = h.max_abs() > 0.0 && r.fixed_point_residual <= 1e-10;

  Rng rng(seed);
  std::uniform_real_distribution<double> value(-1.5, 1.5);
  std::uniform_int_distribution<std::size_t> atom(0, fiber.size() - 1);
  double worst_mod = -std::numeric_limits<double>::infinity();
  double worst_lux = -std::numeric_limits<double>::infinity();
  double worst_inf = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < sample_count; ++s) {
    std::vector<double> v(fiber.size(), 0.0);
    switch (s % 4) {
      case 0:  // single atom
        v[atom(rng)] = value(rng);
        break;
      case 1:  // nonnegative
        for (double& x : v) x = std::fabs(value(rng));
        break;
      default:
        for (double& x : v) x = value(rng);
        break;
    }
    const FiberVector f(std::move(v));
    const FiberVector tf = t.apply(f);
    worst_mod = std::max(worst_mod, modular(m, fiber, tf.abs()) - modular(m, fiber, f.abs()));
    worst_lux = std::max(worst_lux, luxemburg_norm(m, fiber, tf).value - luxemburg_norm(m, fiber, f).value);
    worst_inf = std::max(worst_inf, tf.max_abs() - f.max_abs());
  }
  if (sample_count == 0) worst_mod = worst_lux = worst_inf = 0.0;
  r.worst_modular_excess = worst_mod;
  r.worst_luxemburg_excess = worst_lux;
  r.worst_linf_excess = worst_inf;
  r.modular_contraction = worst_mod <= 1e-10;
  r.luxemburg_contraction = worst_lux <= 1e-9;
  r.linf_contraction = worst_inf <= 1e-10;
  return r;
}

ConditionReport verify_conditions(const BundleOperator& t, const Bundle& bundle, const NFunction& m,
                                  std::size_t sample_count, std::uint64_t seed) {
  if (t.base_size() != bundle.base_size()) throw UsageError("verify_conditions: operator/bundle mismatch");
  ConditionReport r;
  for (const auto& [w, part] : decompose(t))
    r.fibers.push_back(fiber_condition_report(w, part, bundle.fiber(w), t.fixed_point()[w], m, sample_count,
                                              sub_seed(seed, static_cast<std::uint64_t>(w))));
  return r;
}

std::vector<std::pair<std::size_t, FiberOperator>> decompose(const BundleOperator& t) {
  std::vector<std::pair<std::size_t, FiberOperator>> out;
  out.reserve(t.base_size());
  for (std::size_t w = 0; w < t.base_size(); ++w) out.emplace_back(w, t.fiber_operator(w));
  return out;
}

FiberOperator generate_admissible(const Fiber& fiber, std::uint64_t seed, double mixing) {
  if (!(mixing > 0.0 && mixing <= 1.0)) throw DomainError("generate_admissible: mixing must lie in (0, 1]");
  const auto n = static_cast<Eigen::Index>(fiber.size());
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd t0(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) t0(j, i) = 1.0 - unit(rng);  // (0, 1]
  t0 = (1.0 - mixing) * t0 + mixing * Eigen::MatrixXd::Identity(n, n);

  // Balance a = diag(mu) t0 to row and column marginals mu.
  Eigen::VectorXd mu(n);
  for (Eigen::Index i = 0; i < n; ++i) mu(i) = fiber.weight(static_cast<std::size_t>(i));
  Eigen::MatrixXd a = mu.asDiagonal() * t0;
  bool converged = false;
  for (int sweep = 0; sweep < 100000; ++sweep) {
    const Eigen::VectorXd rows = a.rowwise().sum();
    a = (mu.array() / rows.array()).matrix().asDiagonal() * a;
    const Eigen::VectorXd cols = a.colwise().sum().transpose();
    a = a * (mu.array() / cols.array()).matrix().asDiagonal();
    const Eigen::VectorXd row_after = a.rowwise().sum();
    const double residual = ((row_after.array() / mu.array()) - 1.0).abs().maxCoeff();
    if (residual < 1e-12) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ConvergenceError("generate_admissible: Sinkhorn balancing did not converge");
  return FiberOperator(mu.cwiseInverse().asDiagonal() * a);
}

}  // namespace okl
