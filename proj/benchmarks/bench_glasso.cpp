#include <benchmark/benchmark.h>

#include "synlik/models.hpp"
#include "synlik/numerics.hpp"
#include "synlik/shrinkage.hpp"
#include "synlik/simulation.hpp"

namespace {

using namespace synlik;

// Sample covariance of n simulated MA(2) series, the matrix penalty selection
// hands to glasso.
Matrix ma2_sample_cov(int n) {
  const Model model = models::make_ma2_model();
  const SimulationRunner runner(model, 3);
  return moments(runner.simulate(model.theta0(), n, 0)).covariance;
}

// Args: n, lambda * 1e4.
void BM_GlassoMa2(benchmark::State& state) {
  const Matrix s = ma2_sample_cov(static_cast<int>(state.range(0)));
  const double lambda = static_cast<double>(state.range(1)) * 1e-4;
  for (auto _ : state) benchmark::DoNotOptimize(glasso(s, lambda).covariance);
}
BENCHMARK(BM_GlassoMa2)->Args({50, 3142})->Args({150, 800})->Args({300, 272})->Args({500, 58})
    ->Unit(benchmark::kMillisecond);

void BM_Warton(benchmark::State& state) {
  const Matrix s = ma2_sample_cov(300);
  for (auto _ : state) benchmark::DoNotOptimize(warton_covariance(s, 0.75));
}
BENCHMARK(BM_Warton);

}  // namespace

BENCHMARK_MAIN();
