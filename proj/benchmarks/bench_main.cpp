#include <benchmark/benchmark.h>

#include "casimir/cp.hpp"
#include "casimir/energy.hpp"
#include "casimir/pfa.hpp"
#include "casimir/specfun.hpp"
#include "casimir/translation.hpp"

using namespace casimir;

static void BM_ScaledBessel(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(specfun::scaled_bessel(l, 3.7));
}
BENCHMARK(BM_ScaledBessel)->Arg(20)->Arg(80)->Arg(200);

static void BM_ThreeJSeries(benchmark::State& state) {
  const int j = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(specfun::wigner3j_series(j, j, 1, -1));
}
BENCHMARK(BM_ThreeJSeries)->Arg(10)->Arg(40);

static void BM_TranslationBlock(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(translation::v_block(1, L, 2.0));
}
BENCHMARK(BM_TranslationBlock)->Arg(15)->Arg(30);

static void BM_LogdetIntegrand(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto g = energy::Geometry::from_ratio(0.5, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(energy::logdet_integrand(1.5, g, L));
}
BENCHMARK(BM_LogdetIntegrand)->Arg(15)->Arg(25)->Arg(45)->Unit(benchmark::kMillisecond);

static void BM_Energy(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const auto g = energy::Geometry::from_ratio(0.5, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(energy::casimir_energy(g, L));
}
BENCHMARK(BM_Energy)->Arg(15)->Arg(25)->Unit(benchmark::kMillisecond);

static void BM_CpCoefficients(benchmark::State& state) {
  const double xi = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(cp::cp_coefficients(xi));
}
BENCHMARK(BM_CpCoefficients)->Arg(1)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_FullPfa(benchmark::State& state) {
  const pfa::PfaConfig cfg{-0.5, 1e-3, pfa::Basis::r_based};
  for (auto _ : state) benchmark::DoNotOptimize(pfa::full_pfa(cfg));
}
BENCHMARK(BM_FullPfa)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
