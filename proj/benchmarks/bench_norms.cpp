#include <random>

#include <benchmark/benchmark.h>

#include "okl/orlicz.hpp"
#include "okl/rng.hpp"

namespace {

struct Instance {
  okl::Fiber fiber;
  okl::FiberVector x;
};

Instance make(std::size_t n) {
  okl::Rng rng(n);
  std::uniform_real_distribution<double> w(0.5, 1.5);
  std::uniform_real_distribution<double> v(-2.0, 2.0);
  std::vector<double> mu(n);
  std::vector<double> x(n);
  for (auto& m : mu) m = w(rng);
  for (auto& e : x) e = v(rng);
  return {okl::Fiber(std::move(mu)), okl::FiberVector(std::move(x))};
}

okl::NFunction pick(int kind) {
  switch (kind) {
    case 0: return okl::NFunction::power(3.0);
    case 1: return okl::NFunction::exp_type();
    default:
      return okl::NFunction::tabulated({{0, 0}, {0.5, 0.25}, {1, 1}, {1, 1.5}, {2, 3}, {3, 3}}, 2.0);
  }
}

void BM_Luxemburg(benchmark::State& state) {
  const auto m = pick(static_cast<int>(state.range(0)));
  const auto inst = make(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(okl::luxemburg_norm(m, inst.fiber, inst.x).value);
}
BENCHMARK(BM_Luxemburg)->ArgsProduct({{0, 1, 2}, {8, 64, 512}});

void BM_Orlicz(benchmark::State& state) {
  const auto m = pick(static_cast<int>(state.range(0)));
  const auto n = m.complement();
  const auto inst = make(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(okl::orlicz_norm(m, n, inst.fiber, inst.x).value);
}
BENCHMARK(BM_Orlicz)->ArgsProduct({{0, 1, 2}, {8, 64, 512}});

void BM_Complement(benchmark::State& state) {
  const auto m = pick(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(m.complement().valid());
}
BENCHMARK(BM_Complement)->DenseRange(0, 2);

}  // namespace
