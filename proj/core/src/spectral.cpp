#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "okl/ergodic.hpp"
#include "okl/errors.hpp"

namespace okl {
namespace {

using cplx = std::complex<double>;

constexpr double kMatchTol = 1e-9;     // eigenvalue-to-target matching
constexpr double kClusterTol = 1e-6;   // grouping of numerically split eigenvalues
constexpr double kUnimodularTol = 1e-9;

struct Target {
  cplx lambda;
  cplx coefficient;
};

// Cesaro weights as sums of characters: b(k) = sum_j c_j z_j^k, |z_j| = 1.
// Averaging c_j z_j^k lambda^k picks out lambda = conj(z_j).
std::vector<Target> weight_targets(const WeightSequence& w) {
  std::vector<Target> raw;
  if (w.kind() == WeightKind::kConstant) {
    raw.push_back({1.0, w.constant_value()});
  } else {
    for (const auto& term : w.polynomial().terms()) {
      const double angle = 2.0 * std::numbers::pi * term.theta;
      const cplx z(std::cos(angle), std::sin(angle));
      // a cos + b sin = ((a - ib)/2) z^k + ((a + ib)/2) conj(z)^k
      raw.push_back({std::conj(z), cplx(term.a, -term.b) / 2.0});
      raw.push_back({z, cplx(term.a, term.b) / 2.0});
    }
  }
  std::vector<Target> merged;
  for (const auto& t : raw) {
    bool found = false;
    for (auto& m : merged)
      if (std::abs(m.lambda - t.lambda) <= kMatchTol) {
        m.coefficient += t.coefficient;
        found = true;
        break;
      }
    if (!found) merged.push_back(t);
  }
  return merged;
}

// Projection onto ker(T - lambda) along range(T - lambda); nullopt when lambda
// is not semisimple with the given algebraic multiplicity.
std::optional<Eigen::MatrixXcd> spectral_projection(const Eigen::MatrixXd& t, cplx lambda, int multiplicity) {
  const Eigen::Index n = t.rows();
  const Eigen::MatrixXcd shifted = t.cast<cplx>() - lambda * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thresh = 1e-8 * std::max(1.0, t.cwiseAbs().rowwise().sum().maxCoeff());
  int kernel = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= thresh) ++kernel;
  if (kernel != multiplicity) return std::nullopt;
  // Singular values are sorted descending, so the null directions are last.
  const Eigen::MatrixXcd right = svd.matrixV().rightCols(kernel);
  const Eigen::MatrixXcd left = svd.matrixU().rightCols(kernel);
  const Eigen::MatrixXcd pairing = left.adjoint() * right;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> psvd(pairing);
  if (psvd.singularValues().minCoeff() < 1e-8) return std::nullopt;
  return Eigen::MatrixXcd(right * pairing.inverse() * left.adjoint());
}

}  // namespace

std::optional<FiberVector> spectral_limit_oracle(const FiberOperator& t, const Fiber& fiber,
                                                 const WeightSequence& w, const FiberVector& f) {
  require_bound(fiber, t.size(), "spectral_limit_oracle");
  require_bound(fiber, f.size(), "spectral_limit_oracle");
  if (w.kind() == WeightKind::kPerturbed) return std::nullopt;

  const Eigen::MatrixXd& a = t.matrix();
  const Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  if (es.info() != Eigen::Success) return std::nullopt;
  const Eigen::VectorXcd ev = es.eigenvalues();
  const Eigen::Index n = ev.size();

  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(ev(i)) > 1.0 + kUnimodularTol) return std::nullopt;

  auto multiplicity = [&](cplx lambda) {
    int m = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(ev(i) - lambda) <= kClusterTol) ++m;
    return m;
  };

  // Every unimodular eigenvalue must be semisimple.
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(std::abs(ev(i)) - 1.0) > kUnimodularTol) continue;
    if (!spectral_projection(a, ev(i), multiplicity(ev(i)))) return std::nullopt;
  }

  const Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXd>(f.data().data(), n).cast<cplx>();
  Eigen::VectorXcd limit = Eigen::VectorXcd::Zero(n);
  for (const auto& target : weight_targets(w)) {
    // Snap to the computed eigenvalue nearest the target, if within tolerance.
    Eigen::Index best = -1;
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(ev(i) - target.lambda) <= kMatchTol &&
          (best < 0 || std::abs(ev(i) - target.lambda) < std::abs(ev(best) - target.lambda)))
        best = i;
    if (best < 0) continue;
    const auto proj = spectral_projection(a, target.lambda, multiplicity(ev(best)));
    if (!proj) return std::nullopt;
    limit += target.coefficient * (*proj * x);
  }

  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = limit(i).real();
  return FiberVector(std::move(out));
}

}  // namespace okl
