#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "okl/bundle.hpp"
#include "okl/operators.hpp"
#include "okl/weights.hpp"

namespace okl {

struct AveragingOptions {
  std::int64_t n_max = 1000;
  std::int64_t n_dense = 64;      ///< every n <= n_dense is recorded
  double geometric_ratio = 1.25;  ///< recording ratio beyond n_dense
  /// Adds the k = 0 term b(0) f (b(0) = psi(0) for trig-based weights).
  bool include_k0 = false;
};

/// Recorded weighted averages A~_n(f) = (1/n) sum_{k=1}^{n-1} b(k) T^k f.
struct AverageTrace {
  std::vector<std::int64_t> schedule;  ///< recorded n, increasing, ends at n_max
  std::size_t tail_start = 0;          ///< index of the first geometric-schedule entry
  std::vector<Section> averages;       ///< A~_n(f) for each recorded n
  /// sup_{m <= n} (1/m) sum_{k=1}^{m-1} |b(k)| T^k |f|, at each recorded n.
  std::vector<Section> running_sup;
  Section sup_envelope;    ///< running_sup at n_max
  Section limit_estimate;  ///< A~ at the final recorded n
  /// sup_{m >= n, recorded} |A~_m - limit_estimate| for each recorded n.
  std::vector<Section> residual_envelopes;
};

/// Recording schedule: 1..n_dense, then geometric with the given ratio,
/// always ending at n_max. Throws UsageError for n_max < 2.
std::vector<std::int64_t> recording_schedule(const AveragingOptions& opts);

/// Incremental evaluation with one operator application per step and
/// compensated accumulation. Base atoms are processed independently, so the
/// column of any fiber is bit-identical to a run on that fiber alone.
AverageTrace weighted_averages(const BundleOperator& t, const WeightSequence& w, const Section& f,
                               const AveragingOptions& opts);

/// sup_{m >= n} |A~_m - reference| over recorded m, for every recorded n.
std::vector<Section> residual_envelopes(const AverageTrace& trace, const Section& reference);

struct DominantSup {
  Section sup;           ///< sup_{n <= n_max} of the averages of |f| with |b(k)|
  BaseVector ratio;      ///< ||sup||_(M) / (bound(w) ||f||_(M)) per base atom
};

DominantSup dominant_sup(const BundleOperator& t, const Bundle& bundle, const NFunction& m,
                         const WeightSequence& w, const Section& f, std::int64_t n_max);

/// The maximal ratio evaluated on running_sup at every recorded n;
/// nondecreasing in n for each base atom.
std::vector<BaseVector> maximal_ratio_profile(const AverageTrace& trace, const Bundle& bundle,
                                              const NFunction& m, const WeightSequence& w, const Section& f);

struct OLimitReport {
  Section limit_estimate;
  OConvergenceReport global;
  std::vector<bool> base_converged;      ///< verdict on each single-base-atom restriction
  std::vector<double> base_final_envelope;
  bool converged = false;                ///< AND over base atoms
};

/// Order-convergence detection on a recorded trace. The final average is the
/// limit estimate; the remaining recorded averages from the first geometric
/// entry on form the tail handed to o_converges.
OLimitReport detect_o_limit(const AverageTrace& trace, double tol);

/// ||A~_n - limit_estimate||_(M) per recorded n and base atom.
std::vector<BaseVector> limit_residual_norms(const AverageTrace& trace, const Bundle& bundle,
                                             const NFunction& m);

/// Cesaro-limit prediction of the weighted averages from the spectrum of T.
/// Returns nullopt ("no prediction") for perturbed weights, spectrum outside
/// the closed unit disc, defective unimodular eigenvalues, or eigensolver
/// failure.
std::optional<FiberVector> spectral_limit_oracle(const FiberOperator& t, const Fiber& fiber,
                                                 const WeightSequence& w, const FiberVector& f);

}  // namespace okl
