#include <benchmark/benchmark.h>

#include "hetnet/analytic.hpp"
#include "hetnet/config.hpp"
#include "hetnet/montecarlo.hpp"
#include "hetnet/specfun.hpp"

namespace {

const hetnet::Scenario& table1() {
  static const hetnet::Scenario scn = hetnet::validate(hetnet::load_preset("table1").scenario);
  return scn;
}

void BM_Gauss2F1(benchmark::State& state) {
  const double z = -static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hetnet::specfun::gauss_2f1(-0.5, 3.0, 0.5, z));
}
BENCHMARK(BM_Gauss2F1)->Arg(0)->Arg(1)->Arg(1000);

void BM_LaplaceTier2(benchmark::State& state) {
  const auto& scn = table1();
  for (auto _ : state) benchmark::DoNotOptimize(hetnet::analytic::laplace_tier2(2, 1e5, 60.0, scn));
}
BENCHMARK(BM_LaplaceTier2);

void BM_SuccessProbability(benchmark::State& state) {
  const auto& scn = table1();
  for (auto _ : state) benchmark::DoNotOptimize(hetnet::analytic::success_probability(1e8, scn).total);
}
BENCHMARK(BM_SuccessProbability)->Unit(benchmark::kMillisecond);

void BM_MonteCarloDrops(benchmark::State& state) {
  const auto& scn = table1();
  for (auto _ : state) {
    benchmark::DoNotOptimize(hetnet::mc::run_drops(scn, 1e8, state.range(0), 1, {10.0, 1}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloDrops)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
