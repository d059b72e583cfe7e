#pragma once

#include "okl/measure.hpp"
#include "okl/nfunction.hpp"

namespace okl {

struct LuxemburgResult {
  double value = 0.0;              ///< the norm lambda*
  double modular_at_lambda = 0.0;  ///< \int M(x / lambda*) dmu
  int iterations = 0;              ///< bracketing + bisection steps
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
};

struct OrliczNormResult {
  double value = 0.0;
  FiberVector witness;         ///< y* with \int N(y*) dmu <= 1
  double witness_modular = 0.0;  ///< \int N(y*) dmu
  double amemiya_k = 0.0;      ///< minimizer of k -> (1 + \int M(kx)) / k
  int iterations = 0;
};

/// Vectors with sup-norm below this are treated as zero by both norms.
inline constexpr double kZeroVectorThreshold = 1e-300;

/// \int M(x) dmu.
double modular(const NFunction& m, const Fiber& fiber, const FiberVector& x);
/// \int M(c x) dmu without materializing c x.
double modular_scaled(const NFunction& m, const Fiber& fiber, const FiberVector& x, double c);

/// inf{lambda > 0 : \int M(x/lambda) dmu <= 1}, by doubling/halving brackets
/// and bisection to relative width 1e-12. Throws DomainError if M fails its
/// axioms.
LuxemburgResult luxemburg_norm(const NFunction& m, const Fiber& fiber, const FiberVector& x);

/// sup{\int x y dmu : \int N(y) dmu <= 1}, evaluated through the Amemiya
/// functional k -> (1 + \int M(kx) dmu) / k minimized by golden section on
/// log k. The witness is y_i = sign(x_i) p(k* |x_i|) pushed onto the
/// boundary \int N(y) dmu = 1.
OrliczNormResult orlicz_norm(const NFunction& m, const Fiber& fiber, const FiberVector& x);
OrliczNormResult orlicz_norm(const NFunction& m, const NFunction& complement, const Fiber& fiber,
                             const FiberVector& x);

}  // namespace okl
