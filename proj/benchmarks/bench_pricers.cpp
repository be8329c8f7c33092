#include <benchmark/benchmark.h>

#include "bondkit/analysis.hpp"
#include "bondkit/approximation.hpp"
#include "bondkit/closed_form.hpp"

namespace {

using namespace bondkit;

void BM_CwLogPrice(benchmark::State& state) {
  const ModelParams p = benchmark_params(static_cast<double>(state.range(0)) / 100.0);
  double r = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cw_log_price(p, 1.0, r));
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_CwLogPrice)->Arg(50)->Arg(132);

void BM_ImprovedLogPrice(benchmark::State& state) {
  const ModelParams p = benchmark_params(static_cast<double>(state.range(0)) / 100.0);
  double r = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(improved_log_price(p, 1.0, r));
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_ImprovedLogPrice)->Arg(50)->Arg(75)->Arg(132);

void BM_CirLogPrice(benchmark::State& state) {
  const ModelParams p = benchmark_params(0.5);
  double r = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cir_log_price(p, 1.0, r));
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_CirLogPrice);

// Full residual via forward-mode derivatives.
void BM_CwResidual(benchmark::State& state) {
  const ModelParams p = benchmark_params(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(cw_residual(p, 1.0, 0.05));
}
BENCHMARK(BM_CwResidual);

void BM_NormOfDifference(benchmark::State& state) {
  const ModelParams p = benchmark_params(0.5);
  const RateGrid grid(0.0, 0.15, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const auto d = difference(sample_curve(Method::Improved, p, grid, 1.0), sample_curve(Method::Cir, p, grid, 1.0));
    benchmark::DoNotOptimize(l2_norm(d));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NormOfDifference)->Arg(1501)->Arg(6001);

}  // namespace
