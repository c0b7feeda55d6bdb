#include <benchmark/benchmark.h>
#include <omp.h>

#include "slacksim/sca/cpa.hpp"
#include "slacksim/sca/kernels.hpp"
#include "slacksim/util/prng.hpp"

namespace {

using namespace slacksim;

power::TraceSet synthetic_set(std::size_t n, std::size_t len) {
  power::TraceSet ts(power::SetKind::Attack, n, len);
  Prng rng(42);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& b : ts.plaintext(i)) b = static_cast<std::uint8_t>(rng.uniform(255));
    for (auto& s : ts.trace(i)) s = static_cast<std::uint32_t>(rng.uniform(96));
  }
  return ts;
}

void BM_CorrelationReference(benchmark::State& state) {
  const auto ts = synthetic_set(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(sca::reference::correlate(ts, 0));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1) * 256);
}

void BM_CorrelationAccumulator(benchmark::State& state) {
  const auto ts = synthetic_set(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  omp_set_num_threads(static_cast<int>(state.range(2)));
  for (auto _ : state) {
    sca::CpaAccumulator acc(ts.n_samples());
    acc.add_range(ts, 0, 0, ts.size());
    benchmark::DoNotOptimize(acc.correlations());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1) * 256);
}

BENCHMARK(BM_CorrelationReference)->Args({500, 64})->Args({2000, 256})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CorrelationAccumulator)
    ->ArgsProduct({{500, 2000}, {64, 256}, {1, 2, 4, 8}})
    ->UseRealTime()
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
