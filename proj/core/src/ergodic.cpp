#include "okl/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "okl/errors.hpp"
#include "okl/orlicz.hpp"

namespace okl {
namespace {

// Compensated (Neumaier) accumulation of a vector sum.
struct VectorAccumulator {
  Eigen::VectorXd sum;
  Eigen::VectorXd comp;
  explicit VectorAccumulator(Eigen::Index n) : sum(Eigen::VectorXd::Zero(n)), comp(Eigen::VectorXd::Zero(n)) {}
  void add(double c, const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double x = c * v(i);
      const double t = sum(i) + x;
      if (std::fabs(sum(i)) >= std::fabs(x))
        comp(i) += (sum(i) - t) + x;
      else
        comp(i) += (x - t) + sum(i);
      sum(i) = t;
    }
  }
  Eigen::VectorXd value() const { return sum + comp; }
};

FiberVector to_fiber_vector(const Eigen::VectorXd& v) {
  return FiberVector(std::vector<double>(v.data(), v.data() + v.size()));
}

double weight_at_zero(const WeightSequence& w) {
  return w.kind() == WeightKind::kConstant ? w.constant_value() : w.polynomial()(0);
}

}  // namespace

std::vector<std::int64_t> recording_schedule(const AveragingOptions& opts) {
  if (opts.n_max < 2) throw UsageError("weighted averages need n_max >= 2");
  if (opts.n_dense < 1) throw UsageError("n_dense must be >= 1");
  if (!(opts.geometric_ratio > 1.0)) throw UsageError("geometric ratio must exceed 1");
  std::vector<std::int64_t> s;
  std::int64_t n = 1;
  for (; n <= std::min(opts.n_dense, opts.n_max); ++n) s.push_back(n);
  n = s.back();
  while (n < opts.n_max) {
    const auto next = static_cast<std::int64_t>(std::ceil(static_cast<double>(n) * opts.geometric_ratio));
    n = std::min(std::max(next, n + 1), opts.n_max);
    s.push_back(n);
  }
  return s;
}

AverageTrace weighted_averages(const BundleOperator& t, const WeightSequence& w, const Section& f,
                               const AveragingOptions& opts) {
  if (f.size() != t.base_size()) throw UsageError("weighted_averages: section/operator mismatch");
  AverageTrace tr;
  tr.schedule = recording_schedule(opts);
  tr.tail_start = static_cast<std::size_t>(
      std::find_if(tr.schedule.begin(), tr.schedule.end(), [&](auto n) { return n > opts.n_dense; }) -
      tr.schedule.begin());
  if (tr.tail_start == tr.schedule.size()) tr.tail_start = tr.schedule.size() - 1;

  const std::size_t recorded = tr.schedule.size();
  const std::size_t base = f.size();
  std::vector<std::vector<FiberVector>> avg(recorded, std::vector<FiberVector>(base));
  std::vector<std::vector<FiberVector>> sup(recorded, std::vector<FiberVector>(base));

  const double b0 = opts.include_k0 ? weight_at_zero(w) : 0.0;
  for (std::size_t om = 0; om < base; ++om) {
    const Eigen::MatrixXd& a = t.fiber_operator(om).matrix();
    const auto n_atoms = static_cast<Eigen::Index>(f[om].size());
    if (n_atoms != a.rows()) throw UsageError("weighted_averages: section part does not match its operator");
    Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(f[om].data().data(), n_atoms);
    Eigen::VectorXd g_abs = g.cwiseAbs();
    VectorAccumulator s(n_atoms);
    VectorAccumulator s_abs(n_atoms);
    if (opts.include_k0) {
      s.add(b0, g);
      s_abs.add(std::fabs(b0), g_abs);
    }
    Eigen::VectorXd running = Eigen::VectorXd::Constant(n_atoms, -std::numeric_limits<double>::infinity());
    std::size_t next = 0;
    for (std::int64_t n = 1; n <= opts.n_max; ++n) {
      // s holds sum_{k=1}^{n-1} b(k) T^k f here.
      const double inv_n = 1.0 / static_cast<double>(n);
      running = running.cwiseMax(s_abs.value() * inv_n);
      if (next < recorded && tr.schedule[next] == n) {
        avg[next][om] = to_fiber_vector(s.value() * inv_n);
        sup[next][om] = to_fiber_vector(running);
        ++next;
      }
      if (n == opts.n_max) break;
      g = a * g;
      g_abs = a * g_abs;
      const double b = w(n);
      s.add(b, g);
      s_abs.add(std::fabs(b), g_abs);
    }
  }

  tr.averages.reserve(recorded);
  tr.running_sup.reserve(recorded);
  for (std::size_t r = 0; r < recorded; ++r) {
    tr.averages.emplace_back(std::move(avg[r]));
    tr.running_sup.emplace_back(std::move(sup[r]));
  }
  tr.sup_envelope = tr.running_sup.back();
  tr.limit_estimate = tr.averages.back();
  tr.residual_envelopes = residual_envelopes(tr, tr.limit_estimate);
  return tr;
}

std::vector<Section> residual_envelopes(const AverageTrace& trace, const Section& reference) {
  std::vector<Section> env(trace.averages.size());
  if (env.empty()) return env;
  Section running = (trace.averages.back() - reference).abs();
  env.back() = running;
  for (std::size_t r = env.size() - 1; r-- > 0;) {
    const Section dev = (trace.averages[r] - reference).abs();
    for (std::size_t w = 0; w < dev.size(); ++w)
      for (std::size_t i = 0; i < dev[w].size(); ++i) running[w][i] = std::max(running[w][i], dev[w][i]);
    env[r] = running;
  }
  return env;
}

namespace {

BaseVector ratio_for(const Section& sup, const Bundle& bundle, const NFunction& m, double bound,
                     const BaseVector& f_norms) {
  BaseVector ratio(sup.size(), 0.0);
  for (std::size_t w = 0; w < sup.size(); ++w) {
    if (f_norms[w] == 0.0 || bound == 0.0) continue;
    ratio[w] = luxemburg_norm(m, bundle.fiber(w), sup[w]).value / (bound * f_norms[w]);
  }
  return ratio;
}

}  // namespace

DominantSup dominant_sup(const BundleOperator& t, const Bundle& bundle, const NFunction& m,
                         const WeightSequence& w, const Section& f, std::int64_t n_max) {
  require_bound(bundle, f, "dominant_sup");
  AveragingOptions opts;
  opts.n_max = n_max;
  const AverageTrace tr = weighted_averages(t, w, f, opts);
  DominantSup out;
  out.sup = tr.sup_envelope;
  out.ratio = ratio_for(out.sup, bundle, m, w.bound(), section_norm(m, bundle, f, NormKind::kLuxemburg));
  return out;
}

std::vector<BaseVector> maximal_ratio_profile(const AverageTrace& trace, const Bundle& bundle,
                                              const NFunction& m, const WeightSequence& w, const Section& f) {
  const BaseVector f_norms = section_norm(m, bundle, f, NormKind::kLuxemburg);
  std::vector<BaseVector> out;
  out.reserve(trace.running_sup.size());
  for (const auto& s : trace.running_sup) out.push_back(ratio_for(s, bundle, m, w.bound(), f_norms));
  return out;
}

OLimitReport detect_o_limit(const AverageTrace& trace, double tol) {
  if (trace.averages.size() < 2) throw UsageError("detect_o_limit: trace needs at least two recorded averages");
  OLimitReport r;
  r.limit_estimate = trace.limit_estimate;
  const std::span<const Section> tail(trace.averages.data(), trace.averages.size() - 1);
  const std::size_t start = std::min(trace.tail_start, tail.size() - 1);
  r.global = o_converges(tail, r.limit_estimate, start, tol);

  const std::size_t base = r.limit_estimate.size();
  r.base_converged.resize(base);
  r.base_final_envelope.resize(base);
  r.converged = true;
  for (std::size_t w = 0; w < base; ++w) {
    std::vector<Section> restricted;
    restricted.reserve(tail.size());
    for (const auto& s : tail) restricted.push_back(restrict_section(s, w));
    const auto rep = o_converges(restricted, restrict_section(r.limit_estimate, w), start, tol);
    r.base_converged[w] = rep.converged;
    r.base_final_envelope[w] = rep.final_envelope_max;
    r.converged = r.converged && rep.converged;
  }
  return r;
}

std::vector<BaseVector> limit_residual_norms(const AverageTrace& trace, const Bundle& bundle,
                                             const NFunction& m) {
  std::vector<BaseVector> out;
  out.reserve(trace.averages.size());
  for (const auto& a : trace.averages)
    out.push_back(section_norm(m, bundle, a - trace.limit_estimate, NormKind::kLuxemburg));
  return out;
}

}  // namespace okl
