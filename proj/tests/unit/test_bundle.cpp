#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "okl/bundle.hpp"
#include "okl/errors.hpp"
#include "okl/orlicz.hpp"
#include "test_support.hpp"

namespace okl {
namespace {

using okl::testing::pick;
using okl::testing::random_bundle;
using okl::testing::random_section;

Bundle small_bundle() {
  return Bundle(BaseSpace({1.0, 2.0}), {Fiber({0.5, 1.5}), Fiber({1.0, 1.0, 3.0})});
}

IdempotentSection random_idempotents(Rng& rng, const Bundle& b) {
  std::vector<FiberIdempotent> parts;
  for (const auto& f : b.fibers())
    parts.push_back(FiberIdempotent::from_mask(f.size(), std::uniform_int_distribution<unsigned long long>(
                                                             0, (1ull << f.size()) - 1)(rng)));
  return IdempotentSection(std::move(parts));
}

TEST(BundleConstruction, FiberCountMustMatchBase) {
  EXPECT_THROW(Bundle(BaseSpace({1.0, 1.0}), {Fiber({1.0})}), UsageError);
  EXPECT_THROW(BaseSpace({1.0, 0.0}), UsageError);
}

TEST(MeasureOf, TopAndBottom) {
  const auto b = small_bundle();
  EXPECT_EQ(measure_of(b, IdempotentSection::top(b)), (BaseVector{2.0, 5.0}));
  EXPECT_EQ(measure_of(b, IdempotentSection::bottom(b)), (BaseVector{0.0, 0.0}));
}

TEST(MeasureOf, AdditiveOnDisjoint) {
  Rng rng(51);
  for (int k = 0; k < 100; ++k) {
    const auto b = random_bundle(rng, 4, 6);
    const auto e = random_idempotents(rng, b);
    std::vector<FiberIdempotent> gp;
    for (std::size_t w = 0; w < b.base_size(); ++w) gp.push_back(e[w].complement().meet(random_idempotents(rng, b)[w]));
    const IdempotentSection g(std::move(gp));
    const auto sum = measure_of(b, e.join(g));
    const auto me = measure_of(b, e);
    const auto mg = measure_of(b, g);
    for (std::size_t w = 0; w < b.base_size(); ++w) EXPECT_NEAR(sum[w], me[w] + mg[w], 1e-14 * std::max(1.0, sum[w]));
  }
}

TEST(MeasureOf, UnboundIdempotentThrows) {
  const auto b = small_bundle();
  EXPECT_THROW(measure_of(b, IdempotentSection({FiberIdempotent::top(2)})), UsageError);
}

TEST(ModuleProperty, ConstantMasks) {
  const auto b = small_bundle();
  const auto e = IdempotentSection({FiberIdempotent::from_mask(2, 1), FiberIdempotent::from_mask(3, 5)});
  EXPECT_EQ(module_property_check(b, {1.0, 1.0}, e), 0.0);
  EXPECT_EQ(module_property_check(b, {0.0, 0.0}, e), 0.0);
}

TEST(ModuleProperty, RandomBundles) {
  Rng rng(53);
  for (int k = 0; k < 100; ++k) {
    std::vector<Fiber> fibers;
    for (int w = 0; w < 4; ++w) fibers.push_back(okl::testing::random_fiber(rng, pick(rng, 1, 6)));
    const Bundle b(BaseSpace({1, 1, 1, 1}), std::move(fibers));
    BaseVector g(4);
    for (auto& v : g) v = static_cast<double>(pick(rng, 0, 1));
    EXPECT_EQ(module_property_check(b, g, random_idempotents(rng, b)), 0.0);
  }
}

TEST(ModuleProperty, NonBinaryMaskThrows) {
  const auto b = small_bundle();
  EXPECT_THROW(module_property_check(b, {0.5, 1.0}, IdempotentSection::top(b)), DomainError);
}

TEST(SectionNorm, ZeroSection) {
  const auto b = small_bundle();
  for (auto kind : {NormKind::kLuxemburg, NormKind::kOrlicz})
    EXPECT_EQ(section_norm(NFunction::power(2.0), b, Section::zeros(b), kind), (BaseVector{0.0, 0.0}));
}

TEST(SectionNorm, IdenticalFibersGiveConstant) {
  const Bundle b(BaseSpace({1, 2, 3}), {Fiber({1, 2}), Fiber({1, 2}), Fiber({1, 2})});
  const FiberVector x({0.7, -1.3});
  const Section f({x, x, x});
  for (auto kind : {NormKind::kLuxemburg, NormKind::kOrlicz}) {
    const auto v = section_norm(NFunction::exp_type(), b, f, kind);
    EXPECT_EQ(v[0], v[1]);
    EXPECT_EQ(v[1], v[2]);
  }
}

TEST(SectionNorm, MatchesPerFiberCalls) {
  Rng rng(55);
  const auto m = NFunction::power(3.0);
  for (int k = 0; k < 20; ++k) {
    const auto b = random_bundle(rng, 5, 6);
    const auto f = random_section(rng, b);
    const auto lux = section_norm(m, b, f, NormKind::kLuxemburg);
    const auto orl = section_norm(m, b, f, NormKind::kOrlicz);
    for (std::size_t w = 0; w < b.base_size(); ++w) {
      EXPECT_EQ(lux[w], luxemburg_norm(m, b.fiber(w), f[w]).value);
      EXPECT_EQ(orl[w], orlicz_norm(m, b.fiber(w), f[w]).value);
    }
  }
}

TEST(SectionNorm, UnboundSectionThrows) {
  const auto b = small_bundle();
  EXPECT_THROW(section_norm(NFunction::power(2.0), b, Section({FiberVector({1, 2})}), NormKind::kLuxemburg),
               UsageError);
}

TEST(SectionSup, Examples) {
  Rng rng(57);
  const auto b = random_bundle(rng, 3, 4);
  const auto f = random_section(rng, b);
  const std::vector<Section> one = {f};
  EXPECT_EQ(section_sup(one), f);
  const std::vector<Section> pm = {f, f.scaled(-1.0)};
  EXPECT_EQ(section_sup(pm), f.abs());
  EXPECT_EQ(section_inf(pm), f.abs().scaled(-1.0));
}

TEST(SectionSup, EmptyFamilyThrows) {
  const std::vector<Section> none;
  EXPECT_THROW(section_sup(none), UsageError);
}

TEST(SectionSup, MatchesAtomwiseMaxOracle) {
  Rng rng(59);
  for (int k = 0; k < 50; ++k) {
    const auto b = random_bundle(rng, 4, 6);
    std::vector<Section> fs;
    for (int j = 0; j < 10; ++j) fs.push_back(random_section(rng, b));
    const auto sup = section_sup(fs);
    const auto inf = section_inf(fs);
    for (std::size_t w = 0; w < b.base_size(); ++w)
      for (std::size_t i = 0; i < b.fiber(w).size(); ++i) {
        double hi = -INFINITY;
        double lo = INFINITY;
        for (const auto& s : fs) {
          hi = std::max(hi, s[w][i]);
          lo = std::min(lo, s[w][i]);
          EXPECT_GE(sup[w][i], s[w][i]);
        }
        EXPECT_EQ(sup[w][i], hi);
        EXPECT_EQ(inf[w][i], lo);
      }
  }
}

// Componentwise (fiberwise) sup: the family restricted to base atom w has the
// restricted sup.
TEST(SectionSup, FiberwiseIdentity) {
  Rng rng(61);
  const auto b = random_bundle(rng, 5, 5);
  std::vector<Section> fs;
  for (int j = 0; j < 7; ++j) fs.push_back(random_section(rng, b));
  const auto sup = section_sup(fs);
  for (std::size_t w = 0; w < b.base_size(); ++w) {
    std::vector<Section> restricted;
    for (const auto& s : fs) restricted.push_back(restrict_section(s, w));
    EXPECT_EQ(section_sup(restricted), restrict_section(sup, w));
  }
}

std::vector<Section> harmonic_trace(const Bundle& b, const Section& f, std::size_t n) {
  std::vector<Section> trace;
  for (std::size_t k = 1; k <= n; ++k) trace.push_back(f + Section::constant(b, 1.0 / static_cast<double>(k)));
  return trace;
}

TEST(OConverges, ConstantTrace) {
  const auto b = small_bundle();
  const auto f = Section::constant(b, 0.3);
  const std::vector<Section> trace(20, f);
  const auto r = o_converges(trace, f, 5, 0.0);
  EXPECT_EQ(r.final_envelope_max, 0.0);
  EXPECT_TRUE(r.converged);
}

TEST(OConverges, HarmonicTrace) {
  const auto b = small_bundle();
  Rng rng(63);
  const auto f = random_section(rng, b);
  for (std::size_t n : {4u, 5u, 50u}) {
    const auto r = o_converges(harmonic_trace(b, f, n), f, std::min<std::size_t>(10, n - 1), 0.2);
    EXPECT_NEAR(r.final_envelope_max, 1.0 / static_cast<double>(n), 1e-15);
    EXPECT_TRUE(r.envelope_nonincreasing);
    EXPECT_EQ(r.converged, n >= 5) << n;
  }
}

TEST(OConverges, OscillatingTrace) {
  const auto b = small_bundle();
  std::vector<Section> trace;
  for (int k = 1; k <= 40; ++k) trace.push_back(Section::constant(b, k % 2 == 0 ? 1.0 : -1.0));
  const auto r = o_converges(trace, Section::zeros(b), 10, 0.5);
  for (const auto& e : r.envelopes) EXPECT_EQ(e, Section::constant(b, 1.0));
  EXPECT_FALSE(r.converged);
}

TEST(OConverges, ShortTraceThrows) {
  const auto b = small_bundle();
  const std::vector<Section> trace(3, Section::zeros(b));
  EXPECT_THROW(o_converges(trace, Section::zeros(b), 3, 1.0), UsageError);
}

// Bundle verdict iff every single-base-atom verdict, in both directions.
TEST(OConverges, TransferToRestrictions) {
  Rng rng(65);
  std::uniform_real_distribution<double> amp(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const auto b = random_bundle(rng, 4, 4);
    const auto f = random_section(rng, b);
    std::vector<double> a(b.base_size());
    for (auto& v : a) v = amp(rng) < 0.3 ? 1.0 : 0.01 * amp(rng);
    std::vector<Section> trace;
    for (int n = 1; n <= 30; ++n) {
      Section s = f;
      for (std::size_t w = 0; w < b.base_size(); ++w) {
        const double dev = a[w] >= 1.0 ? (n % 2 == 0 ? 1.0 : -1.0) : a[w] / n;
        for (std::size_t i = 0; i < s[w].size(); ++i) s[w][i] += dev;
      }
      trace.push_back(std::move(s));
    }
    const bool global = o_converges(trace, f, 10, 1e-2).converged;
    bool all = true;
    for (std::size_t w = 0; w < b.base_size(); ++w) {
      std::vector<Section> rt;
      for (const auto& s : trace) rt.push_back(restrict_section(s, w));
      all = all && o_converges(rt, restrict_section(f, w), 10, 1e-2).converged;
    }
    EXPECT_EQ(global, all);
  }
}

TEST(SectionNormProperty, Monotone) {
  Rng rng(67);
  std::uniform_real_distribution<double> shrink(0.0, 1.0);
  for (const auto& m : okl::testing::catalog())
    for (int k = 0; k < 20; ++k) {
      const auto b = random_bundle(rng, 4, 5);
      const auto g = random_section(rng, b);
      Section f = g;
      for (std::size_t w = 0; w < b.base_size(); ++w)
        for (std::size_t i = 0; i < f[w].size(); ++i) f[w][i] *= shrink(rng);
      for (auto kind : {NormKind::kLuxemburg, NormKind::kOrlicz}) {
        const auto nf = section_norm(m, b, f, kind);
        const auto ng = section_norm(m, b, g, kind);
        for (std::size_t w = 0; w < b.base_size(); ++w) EXPECT_LE(nf[w], ng[w] + 1e-10);
      }
    }
}

}  // namespace
}  // namespace okl
