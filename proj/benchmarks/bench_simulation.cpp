#include <benchmark/benchmark.h>

#include "synlik/models.hpp"
#include "synlik/rng.hpp"
#include "synlik/simulation.hpp"

namespace {

using namespace synlik;

void BM_PhiloxNormal(benchmark::State& state) {
  RngStream rng(1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(BM_PhiloxNormal);

void BM_Ma2Series(benchmark::State& state) {
  RngStream rng(1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(models::ma2_simulate(rng, {0.6, 0.2}));
}
BENCHMARK(BM_Ma2Series);

// Args: n, workers.
void BM_RunnerBatch(benchmark::State& state) {
  const Model model = models::make_ma2_model();
  const SimulationRunner runner(model, 1, static_cast<int>(state.range(1)));
  std::uint64_t id = 0;
  for (auto _ : state) benchmark::DoNotOptimize(runner.simulate(model.theta0(), static_cast<int>(state.range(0)), id++));
}
BENCHMARK(BM_RunnerBatch)->Args({500, 1})->Args({500, 2})->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
