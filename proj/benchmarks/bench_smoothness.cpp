#include <benchmark/benchmark.h>

#include <cmath>

#include "dunkl/smoothness.hpp"

using namespace dunkl;

namespace {

Spectrum gaussian_spectrum() {
  static const auto grid = make_grid(kDefaultGrid);
  static const Spectrum s =
      hankel(RadialFunction::sample(grid, [](double t) { return std::exp(-t * t / 2); }), 0.25);
  return s;
}

LpIndex index_of(int64_t code) { return code == 0 ? LpIndex::infinity() : LpIndex(static_cast<double>(code)); }

}  // namespace

static void BM_Modulus(benchmark::State& state) {
  const auto s = gaussian_spectrum();
  const LpIndex p = index_of(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(modulus(s, 0.1, 2.0, p).value);
}
BENCHMARK(BM_Modulus)->Arg(2)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

static void BM_Realization(benchmark::State& state) {
  const auto s = gaussian_spectrum();
  const LpIndex p = index_of(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(realization(s, 0.1, 1.0, p).value);
}
BENCHMARK(BM_Realization)->Arg(2)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_KFunctionalUpper(benchmark::State& state) {
  const auto s = gaussian_spectrum();
  const LpIndex p = index_of(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(k_functional_upper(s, 0.1, 1.0, p));
}
BENCHMARK(BM_KFunctionalUpper)->Arg(2)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_BestApproxSequence(benchmark::State& state) {
  const auto s = gaussian_spectrum();
  for (auto _ : state) benchmark::DoNotOptimize(best_approx_sequence(s, 32, 2.0).back());
}
BENCHMARK(BM_BestApproxSequence)->Unit(benchmark::kMillisecond);
