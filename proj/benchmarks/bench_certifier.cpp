#include <benchmark/benchmark.h>

#include "hatcert/certifier.hpp"
#include "hatcert/delta.hpp"
#include "hatcert/functions.hpp"
#include "hatcert/interval.hpp"

using namespace hatcert;

namespace {

const Interval kSupport(1.0 / 12.0, 1.0 / 3.0);

void BM_ExpEnclosure(benchmark::State& state) {
  const Interval x(-3.25, -3.2);
  for (auto _ : state) benchmark::DoNotOptimize(exp_enclosure(x));
}
BENCHMARK(BM_ExpEnclosure);

void BM_SinSqEnclosure(benchmark::State& state) {
  const Interval x(0.7, 0.71);
  for (auto _ : state) benchmark::DoNotOptimize(sin_sq_enclosure(x));
}
BENCHMARK(BM_SinSqEnclosure);

void BM_EvalIntervalPhi(benchmark::State& state) {
  const Interval x(0.2, 0.2 + 1.0 / 1024);
  for (auto _ : state) benchmark::DoNotOptimize(eval_interval(FunctionTag::kPhi, x));
}
BENCHMARK(BM_EvalIntervalPhi);

void BM_SupNorm(benchmark::State& state) {
  const SearchOptions opts{1e-4, 48, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(sup_norm(FunctionTag::kPhi, kSupport, opts).upper);
}
BENCHMARK(BM_SupNorm)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DeltaBound(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(delta_bound(kPhiPsi).value);
}
BENCHMARK(BM_DeltaBound)->Unit(benchmark::kMillisecond);

void BM_DeltaNumeric(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(delta_numeric(kPhiPsi, grid, 20).value);
  state.SetItemsProcessed(state.iterations() * grid);
}
BENCHMARK(BM_DeltaNumeric)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
