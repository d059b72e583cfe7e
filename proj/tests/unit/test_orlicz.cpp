#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "okl/errors.hpp"
#include "okl/orlicz.hpp"
#include "oracles/oracles.hpp"
#include "test_support.hpp"

namespace okl {
namespace {

using okl::testing::catalog;
using okl::testing::pick;
using okl::testing::random_fiber;
using okl::testing::random_vector;

TEST(Modular, Examples) {
  EXPECT_EQ(modular(NFunction::power(2.0), Fiber({1, 1}), FiberVector::zeros(2)), 0.0);
  EXPECT_DOUBLE_EQ(modular(NFunction::power(2.0), Fiber({1, 1}), FiberVector({1, 2})), 5.0);
}

TEST(Modular, TabulatedMatchesQuadrature) {
  const auto m = okl::testing::jump_tabulated();
  Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    const Fiber f = random_fiber(rng, pick(rng, 1, 8));
    const auto x = random_vector(rng, f.size(), -4.0, 4.0);
    double oracle = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
      oracle += f.weight(i) * oracle::quadrature_tabulated(m.knots(), m.tail_slope(), x[i]);
    EXPECT_NEAR(modular(m, f, x), oracle, 1e-10 * std::max(1.0, oracle));
  }
}

TEST(Modular, ScaledAgreesWithMaterialized) {
  const auto m = NFunction::exp_type();
  const Fiber f({0.5, 1.0, 2.0});
  const FiberVector x({0.3, -1.2, 0.7});
  EXPECT_DOUBLE_EQ(modular_scaled(m, f, x, 1.7), modular(m, f, x.scaled(1.7)));
}

TEST(Luxemburg, ZeroVector) { EXPECT_EQ(luxemburg_norm(NFunction::power(2.0), Fiber({1, 2}), FiberVector::zeros(2)).value, 0.0); }

TEST(Luxemburg, PowerIsLp) {
  Rng rng(23);
  for (double r : {1.5, 2.0, 3.0}) {
    const auto m = NFunction::power(r);
    for (int k = 0; k < 20; ++k) {
      const Fiber f = random_fiber(rng, pick(rng, 1, 8));
      const auto x = random_vector(rng, f.size());
      const double lp = lp_norm(f, x, r);
      EXPECT_NEAR(luxemburg_norm(m, f, x).value, lp, 1e-10 * lp) << r;
    }
  }
}

TEST(Luxemburg, IndicatorClosedForm) {
  const Fiber f({0.125, 0.125, 0.75});
  const auto x = FiberIdempotent::from_mask(3, 0b011).indicator();
  EXPECT_NEAR(luxemburg_norm(NFunction::power(2.0), f, x).value, 0.5, 1e-12);
}

TEST(Luxemburg, ExpTypeMatchesGridSearch) {
  const auto m = NFunction::exp_type();
  const oracle::ScalarFn mf = [&](double t) { return m(t); };
  Rng rng(25);
  for (int k = 0; k < 5; ++k) {
    const Fiber f = random_fiber(rng, 6);
    const auto x = random_vector(rng, 6);
    const double lux = luxemburg_norm(m, f, x).value;
    EXPECT_NEAR(lux, oracle::luxemburg_grid_search(mf, f, x), 1e-6 * lux);
  }
}

TEST(Luxemburg, ModularIsOneAtTheNorm) {
  Rng rng(27);
  for (const auto& m : catalog())
    for (int k = 0; k < 50; ++k) {
      const Fiber f = random_fiber(rng, pick(rng, 1, 7));
      const auto x = random_vector(rng, f.size());
      EXPECT_NEAR(luxemburg_norm(m, f, x).modular_at_lambda, 1.0, 1e-9) << m.describe();
    }
}

TEST(Luxemburg, InvalidNFunctionThrows) {
  const auto bad = NFunction::tabulated({{0, 0}, {0, 1}}, 1e-60);
  EXPECT_THROW(luxemburg_norm(bad, Fiber({1.0}), FiberVector({1.0})), DomainError);
}

TEST(Luxemburg, LengthMismatchThrows) {
  EXPECT_THROW(luxemburg_norm(NFunction::power(2.0), Fiber({1.0}), FiberVector({1.0, 2.0})), UsageError);
}

TEST(OrliczNorm, ZeroVector) { EXPECT_EQ(orlicz_norm(NFunction::power(2.0), Fiber({1, 2}), FiberVector::zeros(2)).value, 0.0); }

TEST(OrliczNorm, HalfSquareRatioIsTwo) {
  const auto m = NFunction::power(2.0, 0.5);
  Rng rng(29);
  for (int k = 0; k < 20; ++k) {
    const Fiber f = random_fiber(rng, pick(rng, 1, 6));
    const auto x = random_vector(rng, f.size());
    const double l2 = lp_norm(f, x, 2.0);
    const double orl = orlicz_norm(m, f, x).value;
    const double lux = luxemburg_norm(m, f, x).value;
    EXPECT_NEAR(orl, std::numbers::sqrt2 * l2, 1e-9 * orl);
    EXPECT_NEAR(lux, l2 / std::numbers::sqrt2, 1e-9 * lux);
    EXPECT_NEAR(orl / lux, 2.0, 1e-9);
  }
}

TEST(OrliczNorm, MatchesConstrainedMaximizationOracle) {
  Rng rng(31);
  const std::vector<std::pair<NFunction, oracle::ClosedForm>> cases = {
      {NFunction::power(1.5), oracle::closed_power(1.5, 1.0)},
      {NFunction::power(3.0), oracle::closed_power(3.0, 1.0)},
      {NFunction::exp_type(), oracle::closed_exp_type()}};
  for (const auto& [m, cf] : cases)
    for (int k = 0; k < 3; ++k) {
      const Fiber f = random_fiber(rng, pick(rng, 1, 4));
      const auto x = random_vector(rng, f.size());
      const double value = orlicz_norm(m, f, x).value;
      const double sweep = oracle::orlicz_dual_sweep(cf, f, x);
      const double search = oracle::orlicz_direction_search(cf, f, x, 1000, rng());
      const double oracle_value = std::max(sweep, search);
      EXPECT_NEAR(value, oracle_value, 1e-5 * oracle_value) << m.describe();
    }
}

TEST(OrliczNorm, WitnessInvariants) {
  Rng rng(33);
  for (const auto& m : catalog()) {
    const auto n = m.complement();
    for (int k = 0; k < 50; ++k) {
      const Fiber f = random_fiber(rng, pick(rng, 1, 7));
      const auto x = random_vector(rng, f.size());
      const auto r = orlicz_norm(m, n, f, x);
      FiberVector xy = x;
      for (std::size_t i = 0; i < x.size(); ++i) xy[i] *= r.witness[i];
      EXPECT_GE(integrate(f, xy), r.value - 1e-6 * r.value) << m.describe();
      EXPECT_LE(modular(n, f, r.witness), 1.0 + 1e-9) << m.describe();
      EXPECT_NEAR(r.witness_modular, modular(n, f, r.witness), 1e-12);
    }
  }
}

// --- properties -------------------------------------------------------------

struct NormPair {
  double lux;
  double orl;
};

NormPair both(const NFunction& m, const NFunction& n, const Fiber& f, const FiberVector& x) {
  return {luxemburg_norm(m, f, x).value, orlicz_norm(m, n, f, x).value};
}

TEST(OrliczProperty, Homogeneity) {
  Rng rng(35);
  std::uniform_real_distribution<double> c(-5.0, 5.0);
  for (const auto& m : catalog()) {
    const auto n = m.complement();
    for (int k = 0; k < 50; ++k) {
      const Fiber f = random_fiber(rng, pick(rng, 1, 6));
      const auto x = random_vector(rng, f.size());
      const double a = c(rng);
      const auto base = both(m, n, f, x);
      const auto scaled = both(m, n, f, x.scaled(a));
      EXPECT_NEAR(scaled.lux, std::fabs(a) * base.lux, 1e-10 * std::max(1.0, scaled.lux));
      EXPECT_NEAR(scaled.orl, std::fabs(a) * base.orl, 1e-10 * std::max(1.0, scaled.orl));
    }
  }
}

TEST(OrliczProperty, TriangleInequality) {
  Rng rng(37);
  for (const auto& m : catalog()) {
    const auto n = m.complement();
    for (int k = 0; k < 100; ++k) {
      const Fiber f = random_fiber(rng, pick(rng, 1, 6));
      const auto x = random_vector(rng, f.size());
      const auto y = random_vector(rng, f.size());
      const auto a = both(m, n, f, x);
      const auto b = both(m, n, f, y);
      const auto s = both(m, n, f, x + y);
      EXPECT_LE(s.lux, a.lux + b.lux + 1e-9);
      EXPECT_LE(s.orl, a.orl + b.orl + 1e-9);
    }
  }
}

TEST(OrliczProperty, ZeroIffZero) {
  for (const auto& m : catalog()) {
    const Fiber f({0.4, 1.1, 0.9});
    EXPECT_EQ(both(m, m.complement(), f, FiberVector::zeros(3)).lux, 0.0);
    const auto tiny = both(m, m.complement(), f, FiberVector({0.0, 1e-9, 0.0}));
    EXPECT_GT(tiny.lux, 0.0);
    EXPECT_GT(tiny.orl, 0.0);
  }
}

TEST(OrliczProperty, MonotoneInAbsoluteValue) {
  Rng rng(39);
  std::uniform_real_distribution<double> shrink(0.0, 1.0);
  const auto cat = catalog();
  for (int k = 0; k < 1000; ++k) {
    const auto& m = cat[k % cat.size()];
    const Fiber f = random_fiber(rng, pick(rng, 1, 6));
    const auto big = random_vector(rng, f.size());
    FiberVector small = big;
    for (std::size_t i = 0; i < f.size(); ++i) small[i] *= (shrink(rng) < 0.5 ? -1.0 : 1.0) * shrink(rng);
    EXPECT_LE(luxemburg_norm(m, f, small).value, luxemburg_norm(m, f, big).value * (1 + 1e-12) + 1e-15);
    EXPECT_LE(orlicz_norm(m, f, small).value, orlicz_norm(m, f, big).value * (1 + 1e-9) + 1e-15);
  }
}

TEST(OrliczProperty, NormEquivalence) {
  Rng rng(41);
  const auto cat = catalog();
  std::vector<NFunction> comps;
  for (const auto& m : cat) comps.push_back(m.complement());
  for (int k = 0; k < 1000; ++k) {
    const std::size_t j = k % cat.size();
    const Fiber f = random_fiber(rng, pick(rng, 1, 8));
    const auto x = random_vector(rng, f.size());
    const auto v = both(cat[j], comps[j], f, x);
    EXPECT_LE(v.lux, v.orl * (1 + 1e-9));
    EXPECT_LE(v.orl, 2.0 * v.lux * (1 + 1e-9));
  }
}

TEST(OrliczProperty, HolderDuality) {
  Rng rng(43);
  const auto cat = catalog();
  for (int k = 0; k < 1000; ++k) {
    const auto& m = cat[k % cat.size()];
    const auto n = m.complement();
    const Fiber f = random_fiber(rng, pick(rng, 1, 8));
    const auto x = random_vector(rng, f.size());
    const auto y = random_vector(rng, f.size());
    FiberVector xy = x;
    for (std::size_t i = 0; i < x.size(); ++i) xy[i] = std::fabs(x[i] * y[i]);
    EXPECT_LE(integrate(f, xy), orlicz_norm(m, n, f, x).value * luxemburg_norm(n, f, y).value + 1e-9)
        << m.describe();
  }
}

TEST(OrliczProperty, ContainedInL1) {
  Rng rng(45);
  for (const auto& m : catalog()) {
    const auto n = m.complement();
    for (int k = 0; k < 100; ++k) {
      const Fiber f = random_fiber(rng, pick(rng, 1, 8));
      const auto x = random_vector(rng, f.size());
      const double c_fiber = luxemburg_norm(n, f, FiberVector::constant(f.size(), 1.0)).value;
      EXPECT_LE(integrate(f, x.abs()), orlicz_norm(m, n, f, x).value * c_fiber * (1 + 1e-9));
    }
  }
}

}  // namespace
}  // namespace okl
