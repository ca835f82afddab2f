#include <benchmark/benchmark.h>

#include "diffinv/inversion.hpp"
#include "diffinv/ode.hpp"

namespace {

using diffinv::Algorithm;

constexpr std::uint64_t kSeed = 1;
constexpr std::size_t kSteps = 100;

template <Algorithm A>
void BM_DifferentialInverse(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const diffinv::GeneralizedLotkaVolterra sys(diffinv::make_random_glv(n, kSeed));
  const diffinv::StateVector x0(n, 1.0);
  diffinv::IntegrationConfig cfg;
  cfg.m = kSteps;

  std::uint64_t flops = 0;
  for (auto _ : state) {
    auto result = diffinv::differential_inverse(A, sys, x0, std::nullopt, cfg);
    flops = result.total_cost.multiply_adds;
    benchmark::DoNotOptimize(result.w);
  }
  state.counters["flops"] = static_cast<double>(flops);
  state.counters["flop_rate"] = benchmark::Counter(static_cast<double>(flops), benchmark::Counter::kIsIterationInvariantRate);
}

void BM_Integrate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const diffinv::GeneralizedLotkaVolterra sys(diffinv::make_random_glv(n, kSeed));
  const diffinv::StateVector x0(n, 1.0);
  diffinv::IntegrationConfig cfg;
  cfg.m = kSteps;
  for (auto _ : state) benchmark::DoNotOptimize(diffinv::integrate(sys, x0, cfg));
}

void BM_LuFactor(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  diffinv::DenseMatrix a = diffinv::make_random_glv(n, kSeed).a;
  for (auto _ : state) benchmark::DoNotOptimize(diffinv::lu_factor(a));
  state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_Integrate)->RangeMultiplier(2)->Range(4, 64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DifferentialInverse<Algorithm::full>)->RangeMultiplier(2)->Range(4, 64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DifferentialInverse<Algorithm::partial>)->RangeMultiplier(2)->Range(4, 64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DifferentialInverse<Algorithm::blackbox>)->RangeMultiplier(2)->Range(4, 32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LuFactor)->RangeMultiplier(2)->Range(4, 128)->Complexity(benchmark::oNCubed);

BENCHMARK_MAIN();
