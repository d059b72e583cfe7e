#pragma once

// Reference computations that share no code path with okl_core's numerics.
// Slow on purpose; used by the suite and the tests to freeze expectations.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "okl/measure.hpp"
#include "okl/nfunction.hpp"

namespace okl::oracle {

using ScalarFn = std::function<double(double)>;

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
double adaptive_simpson(const ScalarFn& f, double a, double b, double tol, int max_depth = 50);

/// Linear interpolation of knots with a linear tail; jumps (equal t) take
/// the later value.
double piecewise_linear_density(const std::vector<DensityKnot>& knots, double tail_slope, double t);

/// \int_0^{|t|} p by adaptive Simpson, split at every knot.
double quadrature_tabulated(const std::vector<DensityKnot>& knots, double tail_slope, double t);

/// sup_{t >= 0} (s t - m(t)) by golden section after bracketing.
double legendre_conjugate(const ScalarFn& m, double s);

/// Closed-form N-function data written independently of NFunction.
struct ClosedForm {
  ScalarFn m;  ///< M(t), t >= 0
  ScalarFn p;  ///< M'
  ScalarFn n;  ///< complement N(s)
  ScalarFn q;  ///< N'
  ScalarFn m_inverse;
};
/// M(t) = c t^r.
ClosedForm closed_power(double r, double c);
/// M(t) = e^t - t - 1.
ClosedForm closed_exp_type();

/// Smallest grid lambda in a factor-2 bracket with \int m(|x|/lambda) <= 1,
/// on `points` equispaced candidates.
double luxemburg_grid_search(const ScalarFn& m, const Fiber& fiber, const FiberVector& x,
                             std::size_t points = 1000000);

/// y(s) = sign(x) p(s |x|); bisection on s for \int N(y) = 1; returns \int x y.
double orlicz_dual_sweep(const ClosedForm& cf, const Fiber& fiber, const FiberVector& x);

/// Direct search for sup{\int x y : \int N(y) <= 1}: the boundary point along
/// a direction u is found by bisection, and directions are explored by random
/// restarts followed by shrinking compass search.
double orlicz_direction_search(const ClosedForm& cf, const Fiber& fiber, const FiberVector& x, int restarts,
                               std::uint64_t seed);

/// max over coordinate vectors and `samples` random x of ||Tx||_1 / ||x||_1.
double l1_ratio_search(const Eigen::MatrixXd& t, const Fiber& fiber, int samples, std::uint64_t seed);

/// H_n, summed from the small end in long double.
double harmonic_number(std::int64_t n);

/// (1/n) sum_{k=1}^{n-1} b(k) T^k f by plain repeated multiplication in long
/// double; b is called with k >= 1.
std::vector<double> direct_average(const Eigen::MatrixXd& t, const std::function<double(std::int64_t)>& b,
                                   const std::vector<double>& f, std::int64_t n);

/// Finite-n constant-weight average (1/n) sum_{k=1}^{n-1} T^k f from an
/// eigendecomposition, with geometric sums in closed form. Requires a
/// diagonalizable T.
std::vector<double> eigen_average(const Eigen::MatrixXd& t, const std::vector<double>& f, std::int64_t n);

}  // namespace okl::oracle
