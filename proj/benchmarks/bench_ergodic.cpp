#include <random>

#include <benchmark/benchmark.h>

#include "okl/ergodic.hpp"
#include "okl/rng.hpp"

namespace {

void BM_WeightedAverages(benchmark::State& state) {
  const auto atoms = static_cast<std::size_t>(state.range(0));
  const std::int64_t n_max = state.range(1);
  okl::Rng rng(atoms);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> mu(atoms);
  std::vector<double> f(atoms);
  for (auto& m : mu) m = u(rng);
  for (auto& v : f) v = u(rng) - 1.0;
  const okl::Fiber fiber(std::move(mu));
  const okl::BundleOperator t({okl::generate_admissible(fiber, 1, 0.5)});
  const okl::Section section({okl::FiberVector(std::move(f))});
  const auto w = okl::WeightSequence::trig(okl::TrigPolynomial({{0.6180339887, 1.0, 0.0}}), n_max);
  okl::AveragingOptions opts;
  opts.n_max = n_max;
  for (auto _ : state) benchmark::DoNotOptimize(okl::weighted_averages(t, w, section, opts).limit_estimate.max_abs());
  state.SetItemsProcessed(state.iterations() * n_max);
}
BENCHMARK(BM_WeightedAverages)->ArgsProduct({{8, 64}, {10000, 100000}})->Unit(benchmark::kMillisecond);

void BM_GenerateAdmissible(benchmark::State& state) {
  const std::vector<double> mu(static_cast<std::size_t>(state.range(0)), 1.0);
  const okl::Fiber fiber(mu);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(okl::generate_admissible(fiber, ++seed, 0.5).matrix().sum());
}
BENCHMARK(BM_GenerateAdmissible)->RangeMultiplier(4)->Range(4, 64);

}  // namespace
