// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "edsense/detector.hpp"
#include "edsense/montecarlo.hpp"

namespace {

using namespace edsense;

TrafficModel base_traffic() {
  return {HoldingDist::from_mean(HoldingKind::exponential, 5.0),
          HoldingDist::from_mean(HoldingKind::exponential, 5.0), 0.5};
}

const SensingConfig kBase{20, 1.0, -5.0, 4, WeightMode::renewal};

void BM_RocSerial(benchmark::State& state) {
  const SensingConfig c{static_cast<int>(state.range(0)), 1.0, -5.0, 4, WeightMode::renewal};
  const auto grid = default_eta_grid(c, 20001);
  for (auto _ : state) benchmark::DoNotOptimize(roc_serial(base_traffic(), c, grid));
}

void BM_RocParallel(benchmark::State& state) {
  const SensingConfig c{static_cast<int>(state.range(0)), 1.0, -5.0, 4, WeightMode::renewal};
  const auto grid = default_eta_grid(c, 20001);
  for (auto _ : state) benchmark::DoNotOptimize(roc(base_traffic(), c, grid));
}

void BM_TrialsSerial(benchmark::State& state) {
  const mc::RunOptions opt{static_cast<mc::SimMode>(state.range(0)), mc::TraceClock::lattice, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mc::run_trials_grid_serial(base_traffic(), kBase, {20.0, 25.0, 30.0}, 100000, opt));
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}

void BM_TrialsParallel(benchmark::State& state) {
  const mc::RunOptions opt{static_cast<mc::SimMode>(state.range(0)), mc::TraceClock::lattice, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        mc::run_trials_grid(base_traffic(), kBase, {20.0, 25.0, 30.0}, 100000, opt));
  }
  state.SetItemsProcessed(state.iterations() * 100000);
  state.counters["threads"] = omp_get_max_threads();
}

void BM_WeightTables(benchmark::State& state) {
  const int I = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(weight_tables(base_traffic(), I, 1.0, 5, WeightMode::renewal));
  }
}

}  // namespace

// range(0): 0 = full_sample, 1 = gaussian_surrogate
BENCHMARK(BM_RocSerial)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RocParallel)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsSerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightTables)->Arg(20)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
