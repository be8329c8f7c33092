#include <benchmark/benchmark.h>

#include <array>

#include "bondkit/pde_solver.hpp"

namespace {

using namespace bondkit;

void BM_PdeSolve(benchmark::State& state) {
  PdeConfig cfg;
  cfg.n_space = static_cast<std::size_t>(state.range(0));
  cfg.n_time = static_cast<std::size_t>(state.range(1));
  const std::array<double, 4> taus{0.25, 0.5, 0.75, 1.0};
  const ModelParams p = benchmark_params(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, cfg, taus));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_PdeSolve)->Args({501, 2000})->Args({1001, 8000})->Args({4001, 40000})->Unit(benchmark::kMillisecond);

void BM_PdeDriftSchemes(benchmark::State& state) {
  PdeConfig cfg;
  cfg.n_space = 1001;
  cfg.n_time = 4000;
  cfg.drift = static_cast<DriftScheme>(state.range(0));
  const std::array<double, 1> taus{1.0};
  const ModelParams p = benchmark_params(0.75);
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, cfg, taus));
  state.SetLabel(to_string(cfg.drift));
}
BENCHMARK(BM_PdeDriftSchemes)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace
