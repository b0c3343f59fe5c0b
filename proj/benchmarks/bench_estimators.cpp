#include <benchmark/benchmark.h>

#include "synlik/estimators.hpp"
#include "synlik/rng.hpp"

namespace {

using namespace synlik;

SummaryMatrix normal_matrix(Eigen::Index n, Eigen::Index d) {
  RngStream rng(1, make_stream_id(StreamPurpose::User, 0));
  SummaryMatrix m(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rng.normal();
  return m;
}

// Args: n, d.
void BM_Standard(benchmark::State& state) {
  const SummaryMatrix sims = normal_matrix(state.range(0), state.range(1));
  const SummaryVector obs = SummaryVector::Zero(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(standard_sl(obs, sims).log_lik);
}
BENCHMARK(BM_Standard)->Args({100, 10})->Args({500, 50})->Args({2000, 50});

void BM_Unbiased(benchmark::State& state) {
  const SummaryMatrix sims = normal_matrix(state.range(0), state.range(1));
  const SummaryVector obs = SummaryVector::Zero(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(unbiased_sl(obs, sims).log_lik);
}
BENCHMARK(BM_Unbiased)->Args({100, 10})->Args({500, 50});

void BM_SemiParametric(benchmark::State& state) {
  const SummaryMatrix sims = normal_matrix(state.range(0), state.range(1));
  const SummaryVector obs = SummaryVector::Zero(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(semiparam_sl(obs, sims).log_lik);
}
BENCHMARK(BM_SemiParametric)->Args({100, 10})->Args({500, 50});

void BM_RankCorrelation(benchmark::State& state) {
  const SummaryMatrix sims = normal_matrix(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_rank_correlation(sims));
}
BENCHMARK(BM_RankCorrelation)->Args({500, 50});

}  // namespace

BENCHMARK_MAIN();
