#include "okl/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "okl/errors.hpp"

namespace okl {
namespace {

// Fractional part of theta * k with the rounding error of the product folded
// back in, so phases stay accurate for large k.
double phase(double theta, std::int64_t k) {
  const double kd = static_cast<double>(k);
  const double p = theta * kd;
  const double err = std::fma(theta, kd, -p);
  double f = (p - std::floor(p)) + err;
  f -= std::floor(f);
  return f;
}

// cos and sin of 2 pi f, exact at quarter turns.
void cos_sin_turn(double f, double& c, double& s) {
  const double q = f * 4.0;
  if (q == std::floor(q)) {
    switch (static_cast<int>(q) & 3) {
      case 0: c = 1.0; s = 0.0; return;
      case 1: c = 0.0; s = 1.0; return;
      case 2: c = -1.0; s = 0.0; return;
      default: c = 0.0; s = -1.0; return;
    }
  }
  const double angle = 2.0 * std::numbers::pi * f;
  c = std::cos(angle);
  s = std::sin(angle);
}

// sin(2 pi theta k) vanishes for every k exactly when 2 theta is an integer.
bool sine_vanishes(double theta) { return 2.0 * theta == std::floor(2.0 * theta); }

struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

TrigPolynomial::TrigPolynomial(std::vector<TrigTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!(t.theta >= 0.0 && t.theta < 1.0)) throw DomainError("trig frequency must lie in [0, 1)");
    if (!std::isfinite(t.a) || !std::isfinite(t.b)) throw DomainError("trig coefficients must be finite");
  }
}

double TrigPolynomial::operator()(std::int64_t k) const {
  double v = 0.0;
  for (const auto& t : terms_) {
    double c = 0.0;
    double s = 0.0;
    cos_sin_turn(phase(t.theta, k), c, s);
    v += t.a * c + t.b * s;
  }
  return v;
}

double TrigPolynomial::coefficient_bound() const {
  double b = 0.0;
  for (const auto& t : terms_) b += std::fabs(t.a) + std::fabs(t.b);
  return b;
}

WeightSequence WeightSequence::constant(double c, std::int64_t horizon) {
  if (!std::isfinite(c)) throw DomainError("constant weight must be finite");
  WeightSequence w;
  w.kind_ = WeightKind::kConstant;
  w.constant_ = c;
  w.horizon_ = horizon;
  w.compute_bound();
  return w;
}

WeightSequence WeightSequence::trig(TrigPolynomial psi, std::int64_t horizon) {
  WeightSequence w;
  w.kind_ = WeightKind::kTrig;
  w.psi_ = std::move(psi);
  w.horizon_ = horizon;
  w.compute_bound();
  return w;
}

WeightSequence WeightSequence::perturbed(TrigPolynomial psi, double delta, std::int64_t horizon) {
  if (!std::isfinite(delta)) throw DomainError("perturbation amplitude must be finite");
  WeightSequence w;
  w.kind_ = WeightKind::kPerturbed;
  w.psi_ = std::move(psi);
  w.delta_ = delta;
  w.horizon_ = horizon;
  w.compute_bound();
  return w;
}

void WeightSequence::compute_bound() {
  if (horizon_ < 1) throw DomainError("weight horizon must be >= 1");
  if (kind_ == WeightKind::kConstant) {
    bound_ = std::fabs(constant_);
    return;
  }
  double b = 0.0;
  for (std::int64_t k = 1; k <= horizon_; ++k) b = std::max(b, std::fabs((*this)(k)));
  bound_ = b;
}

double WeightSequence::operator()(std::int64_t k) const {
  if (k <= 0) throw DomainError("weights are indexed from k = 1");
  switch (kind_) {
    case WeightKind::kConstant:
      return constant_;
    case WeightKind::kTrig:
      return psi_(k);
    case WeightKind::kPerturbed:
      return psi_(k) + delta_ / static_cast<double>(k);
  }
  return 0.0;
}

double eval_weight(const WeightSequence& w, std::int64_t k) { return w(k); }

double besicovich_defect(const WeightSequence& w, const TrigPolynomial& psi, std::int64_t n) {
  if (n < 1) throw DomainError("besicovich_defect: N must be >= 1");
  Neumaier acc;
  for (std::int64_t k = 1; k <= n; ++k) acc.add(std::fabs(w(k) - psi(k)));
  return acc.value() / static_cast<double>(n);
}

DefectSchedule defect_schedule(const WeightSequence& w, const TrigPolynomial& psi, std::int64_t n0,
                               std::int64_t n_max) {
  if (n0 < 1 || n_max < n0) throw DomainError("defect_schedule: need 1 <= n0 <= n_max");
  DefectSchedule s;
  for (std::int64_t n = n0; n <= n_max; n *= 2) {
    s.horizons.push_back(n);
    s.defects.push_back(besicovich_defect(w, psi, n));
  }
  s.nonincreasing = true;
  for (std::size_t i = 1; i < s.defects.size(); ++i)
    s.nonincreasing = s.nonincreasing && s.defects[i] <= s.defects[i - 1] + 1e-12;
  return s;
}

TrigFit fit_trig_poly(const WeightSequence& w, const std::vector<double>& freqs, std::int64_t n) {
  if (freqs.empty()) throw UsageError("fit_trig_poly: frequency list is empty");
  if (n < 2 * static_cast<std::int64_t>(freqs.size()))
    throw UsageError("fit_trig_poly: horizon must be at least twice the number of frequencies");
  for (double th : freqs)
    if (!(th >= 0.0 && th < 1.0)) throw DomainError("fit_trig_poly: frequencies must lie in [0, 1)");

  struct Column {
    std::size_t term;
    bool is_sine;
  };
  std::vector<Column> cols;
  for (std::size_t m = 0; m < freqs.size(); ++m) {
    cols.push_back({m, false});
    if (!sine_vanishes(freqs[m])) cols.push_back({m, true});
  }
  const auto p = static_cast<Eigen::Index>(cols.size());
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd row(p);
  for (std::int64_t k = 1; k <= n; ++k) {
    for (Eigen::Index c = 0; c < p; ++c) {
      double cs = 0.0;
      double sn = 0.0;
      cos_sin_turn(phase(freqs[cols[c].term], k), cs, sn);
      row(c) = cols[c].is_sine ? sn : cs;
    }
    gram.selfadjointView<Eigen::Lower>().rankUpdate(row);
    rhs += w(k) * row;
  }
  gram = gram.selfadjointView<Eigen::Lower>();

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 1e-10 * hi))
    throw UsageError("fit_trig_poly: rank-deficient design (repeated or aliased frequencies)");

  const Eigen::VectorXd coef = gram.ldlt().solve(rhs);
  std::vector<TrigTerm> terms(freqs.size());
  for (std::size_t m = 0; m < freqs.size(); ++m) terms[m].theta = freqs[m];
  for (Eigen::Index c = 0; c < p; ++c) {
    auto& t = terms[cols[c].term];
    (cols[c].is_sine ? t.b : t.a) = coef(c);
  }
  TrigFit fit{TrigPolynomial(std::move(terms)), 0.0};
  fit.defect = besicovich_defect(w, fit.polynomial, n);
  // Least squares minimizes the L2 defect; fall back to zero if it loses in L1.
  std::vector<TrigTerm> zero_terms;
  for (double th : freqs) zero_terms.push_back({th, 0.0, 0.0});
  TrigPolynomial zero(std::move(zero_terms));
  const double zero_defect = besicovich_defect(w, zero, n);
  if (zero_defect < fit.defect) fit = TrigFit{std::move(zero), zero_defect};
  return fit;
}

}  // namespace okl
