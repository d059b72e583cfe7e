#include <cmath>

#include <gtest/gtest.h>

#include "okl/errors.hpp"
#include "okl/weights.hpp"
#include "oracles/oracles.hpp"

namespace okl {
namespace {

TrigPolynomial two_term() { return TrigPolynomial({{0.1, 0.7, -0.2}, {0.37, 0.0, 0.5}}); }

double squared_residual(const WeightSequence& w, const TrigPolynomial& p, std::int64_t n) {
  double s = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) s += (w(k) - p(k)) * (w(k) - p(k));
  return s;
}

TEST(EvalWeight, Examples) {
  const auto c = WeightSequence::constant(1.0);
  for (std::int64_t k : {1, 2, 99}) EXPECT_EQ(eval_weight(c, k), 1.0);

  const auto w = WeightSequence::trig(TrigPolynomial({{0.25, 1.0, 0.0}}));
  EXPECT_NEAR(w(1), 0.0, 1e-15);
  EXPECT_NEAR(w(2), -1.0, 1e-15);
  EXPECT_NEAR(w(3), 0.0, 1e-15);
  EXPECT_NEAR(w(4), 1.0, 1e-15);

  const auto psi = two_term();
  EXPECT_NEAR(WeightSequence::perturbed(psi, 0.5)(10), psi(10) + 0.05, 1e-15);
}

TEST(EvalWeight, NonPositiveIndexThrows) {
  EXPECT_THROW(WeightSequence::constant(1.0)(0), DomainError);
  EXPECT_THROW(eval_weight(WeightSequence::constant(1.0), -3), DomainError);
}

TEST(TrigPolynomialConstruction, FrequencyOutOfRangeThrows) {
  EXPECT_THROW(TrigPolynomial({{1.0, 1.0, 0.0}}), DomainError);
  EXPECT_THROW(TrigPolynomial({{-0.1, 1.0, 0.0}}), DomainError);
  EXPECT_THROW(TrigPolynomial({{0.2, std::nan(""), 0.0}}), DomainError);
}

TEST(BesicovichDefect, Examples) {
  const auto psi = two_term();
  const auto w = WeightSequence::trig(psi);
  for (std::int64_t n : {1, 17, 1000}) EXPECT_NEAR(besicovich_defect(w, psi, n), 0.0, 1e-15);
  EXPECT_EQ(besicovich_defect(WeightSequence::constant(1.0), TrigPolynomial({{0.0, 1.0, 0.0}}), 500), 0.0);
}

TEST(BesicovichDefect, HarmonicOracle) {
  const auto psi = two_term();
  const double oracle_value = oracle::harmonic_number(1000) / 1000.0;
  EXPECT_NEAR(oracle_value, 0.007485470860550345, 1e-16);
  EXPECT_NEAR(besicovich_defect(WeightSequence::perturbed(psi, 1.0), psi, 1000), oracle_value, 1e-14);
  EXPECT_NEAR(besicovich_defect(WeightSequence::perturbed(psi, 0.25), psi, 77), 0.25 * oracle::harmonic_number(77) / 77,
              1e-14);
}

TEST(BesicovichDefect, NonPositiveHorizonThrows) {
  EXPECT_THROW(besicovich_defect(WeightSequence::constant(1.0), TrigPolynomial(), 0), DomainError);
}

TEST(FitTrigPoly, RecoversTrigCoefficients) {
  const auto psi = two_term();
  const auto fit = fit_trig_poly(WeightSequence::trig(psi), {0.1, 0.37, 0.05}, 400);
  ASSERT_EQ(fit.polynomial.terms().size(), 3u);
  EXPECT_NEAR(fit.polynomial.terms()[0].a, 0.7, 1e-8);
  EXPECT_NEAR(fit.polynomial.terms()[0].b, -0.2, 1e-8);
  EXPECT_NEAR(fit.polynomial.terms()[1].a, 0.0, 1e-8);
  EXPECT_NEAR(fit.polynomial.terms()[1].b, 0.5, 1e-8);
  EXPECT_NEAR(fit.polynomial.terms()[2].a, 0.0, 1e-8);
  EXPECT_NEAR(fit.polynomial.terms()[2].b, 0.0, 1e-8);
  EXPECT_LE(fit.defect, 1e-8);
}

TEST(FitTrigPoly, ConstantAtZeroFrequency) {
  const auto fit = fit_trig_poly(WeightSequence::constant(1.0), {0.0}, 50);
  EXPECT_NEAR(fit.polynomial.terms()[0].a, 1.0, 1e-12);
  EXPECT_NEAR(fit.defect, 0.0, 1e-12);
}

// Known gap: the least-squares coefficients absorb part of delta/k, which
// leaves the L1 defect a few percent above delta H_N / N. Run on its own by
// ctest as an expected failure; see tests/CMakeLists.txt.
TEST(FitTrigPoly, DISABLED_PerturbationBound) {
  const auto psi = two_term();
  for (std::int64_t n : {200, 1000, 5000}) {
    const auto fit = fit_trig_poly(WeightSequence::perturbed(psi, 0.1), {0.1, 0.37}, n);
    EXPECT_LE(fit.defect, 0.1 * oracle::harmonic_number(n) / static_cast<double>(n) + 1e-6) << n;
  }
}

TEST(FitTrigPoly, NeverWorseThanZero) {
  const auto w = WeightSequence::perturbed(TrigPolynomial({{0.2, 0.0, 0.01}}), 3.0);
  const auto fit = fit_trig_poly(w, {0.2, 0.45}, 60);
  TrigPolynomial zero({{0.2, 0.0, 0.0}, {0.45, 0.0, 0.0}});
  EXPECT_LE(fit.defect, besicovich_defect(w, zero, 60) + 1e-15);
}

TEST(FitTrigPoly, Errors) {
  const auto w = WeightSequence::constant(1.0);
  EXPECT_THROW(fit_trig_poly(w, {}, 100), UsageError);
  EXPECT_THROW(fit_trig_poly(w, {0.1, 0.2}, 3), UsageError);
  EXPECT_THROW(fit_trig_poly(w, {0.1, 0.1}, 100), UsageError);
}

// --- properties -------------------------------------------------------------

TEST(WeightProperty, BoundedByCachedBound) {
  const std::vector<WeightSequence> ws = {WeightSequence::constant(-2.5), WeightSequence::trig(two_term()),
                                          WeightSequence::perturbed(two_term(), 0.8),
                                          WeightSequence::perturbed(TrigPolynomial({{0.25, 1.0, 0.0}}), -1.0)};
  for (const auto& w : ws) {
    double mx = 0.0;
    for (std::int64_t k = 1; k <= 100000; ++k) mx = std::max(mx, std::fabs(eval_weight(w, k)));
    EXPECT_LE(mx, w.bound());
    EXPECT_EQ(mx, w.bound());
  }
  EXPECT_LE(WeightSequence::trig(two_term()).bound(), two_term().coefficient_bound());
}

TEST(WeightProperty, PerturbedDefectDecays) {
  const auto psi = two_term();
  for (double delta : {0.1, 1.0, -2.0}) {
    const auto s = defect_schedule(WeightSequence::perturbed(psi, delta), psi, 10, 100000);
    EXPECT_TRUE(s.nonincreasing);
    for (std::size_t i = 1; i < s.defects.size(); ++i) {
      EXPECT_EQ(s.horizons[i], 2 * s.horizons[i - 1]);
      EXPECT_LE(s.defects[i], s.defects[i - 1] + 1e-12);
    }
  }
}

TEST(WeightProperty, FitIsLocallyOptimalInL2) {
  const auto w = WeightSequence::perturbed(two_term(), 0.4);
  const std::int64_t n = 500;
  const auto fit = fit_trig_poly(w, {0.1, 0.37}, n);
  const double base = squared_residual(w, fit.polynomial, n);
  for (std::size_t j = 0; j < fit.polynomial.terms().size(); ++j)
    for (int which = 0; which < 2; ++which)
      for (double d : {1e-3, -1e-3}) {
        auto terms = fit.polynomial.terms();
        (which == 0 ? terms[j].a : terms[j].b) += d;
        EXPECT_GE(squared_residual(w, TrigPolynomial(terms), n), base - 1e-12);
      }
}

}  // namespace
}  // namespace okl
