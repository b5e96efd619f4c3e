#include <benchmark/benchmark.h>

#include <random>

#include "chernlab/cone.hpp"

using namespace chernlab;

namespace {

RealMatrix random_symmetric(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  RealMatrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = nd(rng);
  return 0.5 * (A + A.transpose());
}

}  // namespace

static void BM_OrthantExtrema(benchmark::State& state) {
  const RealMatrix M = random_symmetric(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(orthant_rayleigh_extrema(M));
}
// Up to 4 the facial enumeration runs; beyond that the multistart search.
BENCHMARK(BM_OrthantExtrema)->DenseRange(2, 6);

static void BM_SbcInfimum(benchmark::State& state) {
  RealMatrix M = random_symmetric(static_cast<int>(state.range(0)), 8).cwiseAbs();
  for (auto _ : state) benchmark::DoNotOptimize(sbc_infimum(M));
}
BENCHMARK(BM_SbcInfimum)->DenseRange(2, 4);
