#include <benchmark/benchmark.h>

#include <cmath>

#include "dunkl/special.hpp"
#include "dunkl/transforms.hpp"

using namespace dunkl;

static void BM_BesselNorm(benchmark::State& state) {
  BesselEvaluator j(0.25);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(j(t));
    t = t < 900.0 ? t + 0.37 : 0.0;
  }
}
BENCHMARK(BM_BesselNorm);

static void BM_KernelBuild(benchmark::State& state) {
  const auto grid = make_grid(30.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    HankelKernel k(0.25, grid, grid);
    benchmark::DoNotOptimize(k.matrix().data());
  }
}
BENCHMARK(BM_KernelBuild)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);

static void BM_HankelApply(benchmark::State& state) {
  const auto grid = make_grid(30.0, static_cast<int>(state.range(0)));
  const auto f = RadialFunction::sample(grid, [](double t) { return std::exp(-t * t / 2); });
  (void)hankel(f, 1.0);  // populate the kernel cache
  for (auto _ : state) {
    auto s = hankel(f, 1.0);
    benchmark::DoNotOptimize(s.values().data());
  }
}
BENCHMARK(BM_HankelApply)->Arg(512)->Arg(2048)->Unit(benchmark::kMicrosecond);

static void BM_DunklKernel1D(benchmark::State& state) {
  DunklKernel1D e(0.75);
  double x = -5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(e(x, 2.5));
    x = x < 5.0 ? x + 0.013 : -5.0;
  }
}
BENCHMARK(BM_DunklKernel1D);
