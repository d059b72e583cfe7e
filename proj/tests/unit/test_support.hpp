#pragma once

#include <random>
#include <vector>

#include "okl/bundle.hpp"
#include "okl/measure.hpp"
#include "okl/nfunction.hpp"
#include "okl/rng.hpp"

namespace okl::testing {

inline Fiber random_fiber(Rng& rng, std::size_t n, double lo = 0.2, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> mu(n);
  for (auto& v : mu) v = u(rng);
  return Fiber(std::move(mu));
}

inline FiberVector random_vector(Rng& rng, std::size_t n, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return FiberVector(std::move(x));
}

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Bundle random_bundle(Rng& rng, std::size_t max_base, std::size_t max_fiber) {
  const std::size_t b = pick(rng, 1, max_base);
  std::vector<double> base(b, 1.0);
  std::vector<Fiber> fibers;
  for (std::size_t w = 0; w < b; ++w) fibers.push_back(random_fiber(rng, pick(rng, 1, max_fiber)));
  return Bundle(BaseSpace(std::move(base)), std::move(fibers));
}

inline Section random_section(Rng& rng, const Bundle& b, double lo = -1.0, double hi = 1.0) {
  std::vector<FiberVector> parts;
  for (const auto& f : b.fibers()) parts.push_back(random_vector(rng, f.size(), lo, hi));
  return Section(std::move(parts));
}

/// Density with a jump at 1 and a flat piece on [2, 3].
inline NFunction jump_tabulated() {
  return NFunction::tabulated({{0, 0}, {0.5, 0.25}, {1, 1}, {1, 1.5}, {2, 3}, {3, 3}}, 2.0);
}

inline std::vector<NFunction> catalog() {
  return {NFunction::power(1.5), NFunction::power(2.0), NFunction::power(3.0), NFunction::exp_type(),
          jump_tabulated()};
}

}  // namespace okl::testing
