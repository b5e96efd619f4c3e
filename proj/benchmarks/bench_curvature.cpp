#include <benchmark/benchmark.h>

#include "chernlab/curvature.hpp"

using namespace chernlab;

static void BM_ChernCurvatureFubiniStudy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChartedHermitianMetric m = catalog_metric("fubini_study", {double(n)});
  ComplexVector z(n);
  for (int i = 0; i < n; ++i) z(i) = Complex(0.1 * (i + 1), -0.05 * i);
  for (auto _ : state) benchmark::DoNotOptimize(chern_curvature(m, z));
}
BENCHMARK(BM_ChernCurvatureFubiniStudy)->Arg(1)->Arg(2)->Arg(3)->Arg(4);

static void BM_CurvatureReportHopf(benchmark::State& state) {
  const ChartedHermitianMetric m = catalog_metric("hopf", {2});
  ComplexVector z(2);
  z << Complex(0.7, 0.2), Complex(-0.3, 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(curvature_report(m, z));
}
BENCHMARK(BM_CurvatureReportHopf);
