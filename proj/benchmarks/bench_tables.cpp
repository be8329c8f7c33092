#include <benchmark/benchmark.h>

#include "bondkit/tables.hpp"

namespace {

using namespace bondkit;

void BM_Table(benchmark::State& state) {
  const auto id = static_cast<TableId>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_table(id, benchmark_params()));
}
BENCHMARK(BM_Table)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Table3Coarse(benchmark::State& state) {
  TableOptions opts;
  opts.pde.n_space = 1001;
  opts.pde.n_time = 4000;
  for (auto _ : state) benchmark::DoNotOptimize(build_table(TableId::T3, benchmark_params(), opts));
}
BENCHMARK(BM_Table3Coarse)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace
