#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "okl/errors.hpp"
#include "okl/nfunction.hpp"
#include "oracles/oracles.hpp"
#include "test_support.hpp"

namespace okl {
namespace {

using okl::testing::catalog;
using okl::testing::jump_tabulated;

NFunction three_knot() { return NFunction::tabulated({{0, 0}, {1, 1}, {2, 3}}, 2.0); }

TEST(NFunctionEval, PowerClosedForm) { EXPECT_DOUBLE_EQ(NFunction::power(2.0, 1.0)(2.0), 4.0); }

TEST(NFunctionEval, ZeroAtOrigin) {
  for (const auto& m : catalog()) EXPECT_EQ(m(0.0), 0.0) << m.describe();
}

TEST(NFunctionEval, TabulatedMatchesQuadrature) {
  const auto m = three_knot();
  const double oracle = oracle::quadrature_tabulated(m.knots(), m.tail_slope(), 2.0);
  EXPECT_NEAR(oracle, 2.5, 1e-12);
  EXPECT_NEAR(m(2.0), oracle, 1e-12);
  for (double t : {0.3, 1.0, 1.7, 2.6, 9.0})
    EXPECT_NEAR(m(t), oracle::quadrature_tabulated(m.knots(), m.tail_slope(), t), 1e-12 * std::max(1.0, m(t)));
}

TEST(NFunctionEval, TabulatedWithJumpMatchesQuadrature) {
  const auto m = jump_tabulated();
  for (double t : {0.25, 0.999, 1.0, 1.001, 2.0, 2.5, 3.0, 7.5})
    EXPECT_NEAR(m(t), oracle::quadrature_tabulated(m.knots(), m.tail_slope(), t), 1e-12 * std::max(1.0, m(t)));
}

TEST(NFunctionEval, NonFiniteArgumentThrows) {
  const auto m = NFunction::power(2.0);
  EXPECT_THROW(m(std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_THROW(m(std::numeric_limits<double>::infinity()), DomainError);
}

TEST(NFunctionDensity, Examples) {
  EXPECT_DOUBLE_EQ(NFunction::power(2.0, 1.0).density(3.0), 6.0);
  EXPECT_DOUBLE_EQ(three_knot().density(2.5), 4.0);
  EXPECT_NEAR(NFunction::exp_type().density(1.0), std::numbers::e - 1.0, 1e-15);
}

TEST(NFunctionDensity, NegativeArgumentThrows) {
  EXPECT_THROW(NFunction::power(2.0).density(-1.0), DomainError);
}

TEST(NFunctionDensity, JumpIsRightContinuous) {
  const auto m = jump_tabulated();
  EXPECT_DOUBLE_EQ(m.density(1.0), 1.5);
  EXPECT_DOUBLE_EQ(m.density_left(1.0), 1.0);
}

TEST(NFunctionComplement, HalfSquareIsSelfConjugate) {
  const auto n = NFunction::power(2.0, 0.5).complement();
  for (double s : {0.1, 1.0, 2.5, 40.0}) EXPECT_NEAR(n(s), s * s / 2.0, 1e-12 * s * s);
}

TEST(NFunctionComplement, CubeOverThree) {
  const auto m = NFunction::power(3.0, 1.0 / 3.0);
  const auto n = m.complement();
  for (int j = 1; j <= 100; ++j) {
    const double s = 0.05 * j;
    EXPECT_NEAR(n(s), (2.0 / 3.0) * std::pow(s, 1.5), 1e-12 * std::max(1.0, n(s)));
  }
  for (int j = 1; j <= 100; ++j) {
    const double u = 0.04 * j;
    EXPECT_LE(std::fabs(young_gap(m, n, u, m.density(u))), 1e-10);
  }
}

TEST(NFunctionComplement, DoubleConjugationClosedForms) {
  for (const auto& m : {NFunction::power(1.5), NFunction::power(2.0, 3.0), NFunction::power(3.0), NFunction::exp_type()}) {
    const auto mm = m.complement().complement();
    for (int j = 1; j <= 100; ++j) {
      const double t = 0.05 * j;
      EXPECT_NEAR(mm(t), m(t), 1e-9 * m(t)) << m.describe();
    }
  }
}

TEST(NFunctionComplement, DoubleConjugationTabulated) {
  for (const auto& m : {three_knot(), jump_tabulated()}) {
    const auto mm = m.complement().complement();
    for (int j = 1; j <= 100; ++j) {
      const double t = 0.05 * j;
      EXPECT_NEAR(mm(t), m(t), 1e-6 * m(t));
    }
  }
}

TEST(NFunctionComplement, TabulatedMatchesLegendreOracle) {
  const auto m = jump_tabulated();
  const auto n = m.complement();
  const oracle::ScalarFn quad = [&](double t) { return oracle::quadrature_tabulated(m.knots(), m.tail_slope(), t); };
  for (double s : {0.1, 0.75, 1.0, 1.2, 1.5, 2.9, 3.0, 4.0, 8.0})
    EXPECT_NEAR(n(s), oracle::legendre_conjugate(quad, s), 1e-9 * std::max(1.0, n(s))) << s;
}

TEST(NFunctionComplement, ExpTypeMatchesLegendreOracle) {
  const auto m = NFunction::exp_type();
  const auto n = m.complement();
  const oracle::ScalarFn mf = [&](double t) { return m(t); };
  for (double s : {0.01, 0.5, 1.0, 3.0, 20.0}) EXPECT_NEAR(n(s), oracle::legendre_conjugate(mf, s), 1e-10 * std::max(1.0, n(s)));
}

TEST(NFunctionComplement, FlatPieceBecomesJump) {
  // p = 3 on [2, 3] so q jumps from 2 to 3 at s = 3.
  const auto n = jump_tabulated().complement();
  EXPECT_DOUBLE_EQ(n.density_left(3.0), 2.0);
  EXPECT_DOUBLE_EQ(n.density(3.0), 3.0);
  // p jumps from 1 to 1.5 at t = 1 so q is flat (= 1) on [1, 1.5].
  EXPECT_DOUBLE_EQ(n.density(1.2), 1.0);
}

TEST(NFunctionComplement, InvalidFunctionThrows) {
  const auto abs_like = NFunction::tabulated({{0, 0}, {0, 1}}, 1e-60);
  EXPECT_FALSE(abs_like.valid());
  EXPECT_THROW(abs_like.complement(), DomainError);
}

TEST(YoungGap, Examples) {
  const auto m = NFunction::power(2.0, 0.5);
  EXPECT_NEAR(young_gap(m, 3.0, 3.0), 0.0, 1e-12);
  EXPECT_NEAR(young_gap(m, 1.0, 2.0), 0.5, 1e-12);
}

TEST(YoungGap, NegativeInputsThrow) {
  const auto m = NFunction::power(2.0);
  EXPECT_THROW(young_gap(m, -1.0, 1.0), DomainError);
  EXPECT_THROW(young_gap(m, 1.0, -1.0), DomainError);
}

TEST(YoungGap, GridSweepOverCatalog) {
  for (const auto& m : catalog()) {
    const auto n = m.complement();
    double min_gap = 0.0;
    double eq_gap = 0.0;
    for (int i = 0; i <= 50; ++i) {
      const double u = 0.08 * i;
      for (int j = 0; j <= 50; ++j) min_gap = std::min(min_gap, young_gap(m, n, u, 0.08 * j));
      eq_gap = std::max(eq_gap, std::fabs(young_gap(m, n, u, m.density(u))));
      if (u > 0.0) eq_gap = std::max(eq_gap, std::fabs(young_gap(m, n, u, m.density_left(u))));
    }
    EXPECT_GE(min_gap, -1e-10) << m.describe();
    EXPECT_LE(eq_gap, 1e-10) << m.describe();
  }
}

TEST(YoungGap, PositiveOutsideSubdifferential) {
  const auto m = jump_tabulated();
  // [p(1-), p(1)] = [1, 1.5]: zero inside, positive outside.
  EXPECT_NEAR(young_gap(m, 1.0, 1.25), 0.0, 1e-12);
  EXPECT_GT(young_gap(m, 1.0, 1.6), 1e-6);
  EXPECT_GT(young_gap(m, 1.0, 0.9), 1e-6);
}

TEST(CheckAxioms, PowerPassesAndIsStrictlyConvex) {
  const auto r = check_axioms(NFunction::power(2.0, 1.0));
  EXPECT_TRUE(r.all_pass());
  EXPECT_TRUE(r.strictly_convex_somewhere);
  EXPECT_LT(r.small_probe.ratio, 1e-6);
  EXPECT_GT(r.large_probe.ratio, 1e6);
}

TEST(CheckAxioms, AbsoluteValueLikeFailsBothProbes) {
  const auto r = check_axioms(NFunction::tabulated({{0, 0}, {0, 1}}, 1e-60));
  EXPECT_FALSE(r.small_limit);
  EXPECT_FALSE(r.large_limit);
  EXPECT_FALSE(r.all_pass());
}

TEST(CheckAxioms, ExpTypeAndConjugatePass) {
  EXPECT_TRUE(check_axioms(NFunction::exp_type()).all_pass());
  EXPECT_TRUE(check_axioms(NFunction::exp_conjugate()).all_pass());
}

TEST(CheckAxioms, CatalogAndComplementsPass) {
  for (const auto& m : catalog()) {
    EXPECT_TRUE(check_axioms(m).all_pass()) << m.describe();
    EXPECT_TRUE(check_axioms(m.complement()).all_pass()) << m.describe();
  }
}

TEST(CheckAxioms, DecreasingDensityIsReported) {
  const auto r = check_axioms(NFunction::tabulated({{0, 0}, {1, 2}, {2, 1}}, 1.0));
  EXPECT_FALSE(r.density_monotone);
  EXPECT_FALSE(r.all_pass());
}

TEST(CheckAxioms, LateStartFailsPositivity) {
  // p = 0 on [0, 1]: t+ = 1.
  const auto r = check_axioms(NFunction::tabulated({{0, 0}, {1, 0}, {2, 1}}, 1.0));
  EXPECT_FALSE(r.density_positive_beyond_zero);
}

TEST(CheckAxioms, PiecewiseConstantTabulatedIsNotStrictlyConvexOnKnots) {
  // Strict convexity still comes from the tail.
  const auto r = check_axioms(NFunction::tabulated({{0, 0}, {0, 1}, {5, 1}}, 1.0));
  EXPECT_TRUE(r.strictly_convex_somewhere);
}

TEST(NFunctionTabulated, ValidationErrors) {
  EXPECT_THROW(NFunction::tabulated({}, 1.0), UsageError);
  EXPECT_THROW(NFunction::tabulated({{0.5, 0}, {1, 1}}, 1.0), UsageError);
  EXPECT_THROW(NFunction::tabulated({{0, 0}, {2, 1}, {1, 2}}, 1.0), UsageError);
  EXPECT_THROW(NFunction::tabulated({{0, 0}, {1, 1}, {1, 2}, {1, 3}}, 1.0), UsageError);
  EXPECT_THROW(NFunction::tabulated({{0, 0}, {1, 1}}, 0.0), UsageError);
  EXPECT_THROW(NFunction::tabulated({{0, 0}, {1, std::nan("")}}, 1.0), UsageError);
}

TEST(NFunctionPower, ValidationErrors) {
  EXPECT_THROW(NFunction::power(1.0), UsageError);
  EXPECT_THROW(NFunction::power(2.0, 0.0), UsageError);
}

TEST(NFunctionInverse, InvertsEval) {
  for (const auto& m : catalog())
    for (double y : {1e-6, 0.3, 1.0, 7.0, 100.0}) EXPECT_NEAR(m(m.inverse(y)), y, 1e-10 * std::max(1.0, y)) << m.describe();
}

// --- properties -------------------------------------------------------------

TEST(NFunctionProperty, EvenAndMidpointConvexOnRandomGrids) {
  Rng rng(11);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (const auto& m : catalog())
    for (int k = 0; k < 2000; ++k) {
      const double a = u(rng);
      const double b = u(rng);
      EXPECT_EQ(m(a), m(-a));
      const double rhs = 0.5 * (m(a) + m(b));
      EXPECT_LE(m(0.5 * (a + b)), rhs + 1e-12 * std::max(1.0, rhs));
    }
}

TEST(NFunctionProperty, GeneralizedInverseConsistency) {
  for (const auto& m : {three_knot(), jump_tabulated()}) {
    const auto n = m.complement();
    // Right-continuous p and q: q(p(t)) >= t, and p(q(s)-) <= s (at a jump
    // of p the right value overshoots by design). Slack is a few ulps from
    // the interpolation between knots.
    for (int j = 0; j <= 400; ++j) {
      const double t = 0.0125 * j;
      EXPECT_GE(n.density(m.density(t)), t * (1 - 4e-16)) << t;
      const double s = 0.0125 * j;
      EXPECT_LE(m.density_left(n.density(s)), s * (1 + 4e-16)) << s;
    }
  }
}

TEST(NFunctionProperty, DensityNondecreasing) {
  for (const auto& m : catalog()) {
    double prev = 0.0;
    for (int j = 0; j <= 1000; ++j) {
      const double p = m.density(0.006 * j);
      EXPECT_GE(p, prev);
      prev = p;
    }
  }
}

}  // namespace
}  // namespace okl
