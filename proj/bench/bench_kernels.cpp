#include <benchmark/benchmark.h>

#include "fplb/search.hpp"
#include "fplb/verify.hpp"

using namespace fplb;

namespace {

const InstanceBundle& canon() {
  static const InstanceBundle bundle = canonical_constants();
  return bundle;
}

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

void BM_StepExact(benchmark::State& state) {
  const auto steps = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    FpState s = FpState::symmetric(canon().m_aug.rows());
    for (std::uint64_t t = 0; t < steps; ++t) benchmark::DoNotOptimize(fp_step_symmetric(s, canon().m_aug));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_StepExact)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_StepScaled(benchmark::State& state) {
  const auto steps = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    SymmetricRunner runner(canon().m_aug, Vector(canon().m_aug.rows()));
    for (std::uint64_t t = 0; t < steps; ++t) benchmark::DoNotOptimize(runner.step());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_StepScaled)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_WindowedRunCheck(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(windowed_run_check(canonical_q0(), canonical_q1(), {1, 30}, mode(state)).passed());
  }
}
BENCHMARK(BM_WindowedRunCheck)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Phases(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_phases({1, 12}, canon(), mode(state)).passed());
}
BENCHMARK(BM_Phases)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Search(benchmark::State& state) {
  SearchBounds bounds;
  bounds.max_a = 3;
  bounds.max_b = 4;
  bounds.b22_steps = 30;
  for (auto _ : state) benchmark::DoNotOptimize(search_instances(bounds, mode(state)).stats.pairs);
}
BENCHMARK(BM_Search)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
