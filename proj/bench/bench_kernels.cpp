#include <benchmark/benchmark.h>

#include "ggm/harness.hpp"
#include "ggm/kernels.hpp"

using namespace ggm;

namespace {

Eigen::MatrixXd data(long n, long d) {
  Rng rng(1);
  const auto tree = assign_edge_weights(generate_random_tree(static_cast<int>(d), rng), 0.1, 0.9, rng);
  return sample_dataset(tree, n, {}, rng).samples();
}

void BM_ColumnProductsSerial(benchmark::State& state) {
  const Eigen::MatrixXd x = data(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::column_products_serial(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ColumnProductsParallel(benchmark::State& state) {
  const Eigen::MatrixXd x = data(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::column_products(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ErrorProbability(benchmark::State& state) {
  ExperimentConfig c = preset("star");
  c.trials = 200;
  c.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(error_probability(c, 1000));
}

}  // namespace

BENCHMARK(BM_ColumnProductsSerial)->Args({10000, 10})->Args({100000, 10})->Args({10000, 64});
BENCHMARK(BM_ColumnProductsParallel)->Args({10000, 10})->Args({100000, 10})->Args({10000, 64});
BENCHMARK(BM_ErrorProbability)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
