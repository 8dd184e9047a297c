#include <benchmark/benchmark.h>

#include "addmart/martingale_lab.hpp"
#include "addmart/process_model.hpp"
#include "addmart/simulator.hpp"

namespace {

addmart::ProcessSpec cox_quadratic() {
  return addmart::ProcessSpec(addmart::MonotoneFunction::zero(),
                              {{1.0, addmart::MonotoneFunction::power(1.0, 2.0)}});
}

void BM_SimulatePath(benchmark::State& state) {
  const addmart::ProcessSpec spec = cox_quadratic();
  const auto grid = addmart::uniform_grid(1.0, static_cast<std::size_t>(state.range(0)));
  std::uint64_t p = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(addmart::simulate_path(spec, grid, 1, p++));
  }
}
BENCHMARK(BM_SimulatePath)->Arg(4)->Arg(1 << 10);

void BM_MixedPath(benchmark::State& state) {
  const addmart::ProcessSpec spec(addmart::MonotoneFunction::linear(0.5),
                                  {{1.0, addmart::MonotoneFunction::linear(0.5)},
                                   {-1.0, addmart::MonotoneFunction::linear(0.5)}});
  const auto grid = addmart::uniform_grid(1.0, static_cast<std::size_t>(state.range(0)));
  std::uint64_t p = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(addmart::simulate_path(spec, grid, 1, p++));
  }
}
BENCHMARK(BM_MixedPath)->Arg(1 << 10);

void BM_DecompositionResidual(benchmark::State& state) {
  const addmart::ProcessSpec spec = cox_quadratic();
  const auto grid = addmart::uniform_grid(1.0, static_cast<std::size_t>(state.range(0)));
  const addmart::PathRecord path = addmart::simulate_path(spec, grid, 7, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(addmart::decomposition_residual(spec, path, 4));
  }
}
BENCHMARK(BM_DecompositionResidual)->Arg(1 << 12)->Arg(1 << 14);

void BM_MartingaleTest(benchmark::State& state) {
  const addmart::ProcessSpec spec = cox_quadratic();
  addmart::IncrementTestConfig config;
  config.pairs = {{0.25, 0.5}, {0.5, 1.0}};
  config.num_paths = static_cast<std::size_t>(state.range(0));
  config.seed = 9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(addmart::martingale_test(spec, 3, config));
  }
}
BENCHMARK(BM_MartingaleTest)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
