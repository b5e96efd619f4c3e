#include <benchmark/benchmark.h>

#include "chernlab/holomap.hpp"

using namespace chernlab;

static void BM_LaplacianLogEnergy(benchmark::State& state) {
  const ChartedHermitianMetric P = catalog_metric("poincare_disk", {1});
  const HolomorphicMapModel f = catalog_map("power", {2});
  ComplexVector z(1);
  z << Complex(0.3, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(laplacian_log_energy(f, z, P, P));
}
BENCHMARK(BM_LaplacianLogEnergy);

static void BM_TargetLaplacianEnergy(benchmark::State& state) {
  const ChartedHermitianMetric P = catalog_metric("poincare_disk", {1});
  const HolomorphicMapModel f = catalog_map("mobius", {0.2, 0.1});
  ComplexVector z(1);
  z << Complex(0.3, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(target_laplacian_energy(f, z, P, P));
}
BENCHMARK(BM_TargetLaplacianEnergy);
