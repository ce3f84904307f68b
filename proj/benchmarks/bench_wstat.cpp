#include <benchmark/benchmark.h>

#include "wstat/wstat.hpp"

namespace {

wstat::OrderedSample make_sample(std::size_t n) {
  wstat::RngStream rng(1, 0);
  return wstat::sample({wstat::make_standard("gaussian"), 0.0, 1.0}, n, rng);
}

void BM_Partition(benchmark::State& state, const char* family) {
  const auto d = wstat::make_standard(family);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wstat::partition(d, n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK_CAPTURE(BM_Partition, gaussian, "gaussian")->RangeMultiplier(10)->Range(10, 100000);
BENCHMARK_CAPTURE(BM_Partition, laplace, "laplace")->RangeMultiplier(10)->Range(10, 100000);

void BM_ClosedFormFit(benchmark::State& state) {
  const auto d = wstat::make_standard("gaussian");
  const auto s = make_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wstat::fit_w_location_scale(s, d));
}
BENCHMARK(BM_ClosedFormFit)->RangeMultiplier(10)->Range(10, 100000);

void BM_NumericFit(benchmark::State& state) {
  const wstat::LocationScaleFamily model(wstat::make_standard("gaussian"));
  const auto s = make_sample(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wstat::fit_w_general(s, model, {0.0, 1.0}));
}
BENCHMARK(BM_NumericFit)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Sample(benchmark::State& state) {
  const wstat::LocationScaleModel m{wstat::make_standard("laplace"), 0.0, 1.0};
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t trial = 0;
  for (auto _ : state) {
    wstat::RngStream rng(7, trial++);
    benchmark::DoNotOptimize(wstat::sample(m, n, rng));
  }
}
BENCHMARK(BM_Sample)->RangeMultiplier(10)->Range(100, 100000);

void BM_CostIntervalSum(benchmark::State& state) {
  const auto s = make_sample(static_cast<std::size_t>(state.range(0)));
  const wstat::LocationScaleModel m{wstat::make_standard("gaussian"), 0.1, 1.2};
  for (auto _ : state) benchmark::DoNotOptimize(wstat::cost_interval_sum(s, m));
}
BENCHMARK(BM_CostIntervalSum)->Arg(10)->Arg(1000);

void BM_MetricTensor(benchmark::State& state) {
  const wstat::LocationScaleModel m{wstat::make_standard("laplace"), 0.0, 1.0};
  const auto method = state.range(0) == 0 ? wstat::PsiMethod::analytic
                                          : wstat::PsiMethod::finite_difference;
  for (auto _ : state) benchmark::DoNotOptimize(wstat::metric_tensor(m, method));
}
BENCHMARK(BM_MetricTensor)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
