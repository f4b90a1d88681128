// Serial reference versus OpenMP sweep over Monte Carlo runs.

#include <benchmark/benchmark.h>

#include "dynreg/study.hpp"

namespace {

using dynreg::Execution;
using dynreg::MonteCarloConfig;

MonteCarloConfig config(const benchmark::State& state) {
  MonteCarloConfig mc;
  mc.runs = static_cast<std::size_t>(state.range(0));
  mc.n_points = static_cast<std::size_t>(state.range(1));
  return mc;
}

template <Execution E>
void BM_Equilibria(benchmark::State& state) {
  const MonteCarloConfig mc = config(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynreg::run_equilibria_study(mc, E));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Execution E>
void BM_Simulation(benchmark::State& state) {
  const MonteCarloConfig mc = config(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynreg::run_simulation_study(mc, E));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Equilibria<Execution::Serial>)->Args({50, 20})->Args({50, 200})->UseRealTime();
BENCHMARK(BM_Equilibria<Execution::Parallel>)->Args({50, 20})->Args({50, 200})->UseRealTime();
BENCHMARK(BM_Simulation<Execution::Serial>)->Args({100, 20})->Args({20, 200})->UseRealTime();
BENCHMARK(BM_Simulation<Execution::Parallel>)->Args({100, 20})->Args({20, 200})->UseRealTime();

BENCHMARK_MAIN();
