#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "smalife/config.hpp"
#include "smalife/fitting.hpp"
#include "smalife/harness.hpp"
#include "smalife/sysid.hpp"

using namespace smalife;

static void BM_TrialC1(benchmark::State& state) {
  TrialConfig cfg = default_config().base;
  cfg.v_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_trial(cfg).rows.size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrialC1)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_SweepDefault(benchmark::State& state) {
  const SweepConfig cfg = default_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(cfg.base, cfg.cells(), 1).size());
}
BENCHMARK(BM_SweepDefault)->Unit(benchmark::kMillisecond);

static DecaySeries noisy_decay(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 0.02);
  DecaySeries s;
  for (int v = 1; v <= 100; ++v)
    s.points.push_back({v, 0.4 * std::exp(-0.03 * v) + 0.5 * std::exp(-0.3 * v) + 1.5 + n(rng)});
  return s;
}

static void BM_FitSingle(benchmark::State& state) {
  const DecaySeries s = noisy_decay(1);
  for (auto _ : state) benchmark::DoNotOptimize(fit_single(s).c);
}
BENCHMARK(BM_FitSingle)->Unit(benchmark::kMicrosecond);

static void BM_FitDouble(benchmark::State& state) {
  const DecaySeries s = noisy_decay(1);
  for (auto _ : state) benchmark::DoNotOptimize(fit_double(s).c);
}
BENCHMARK(BM_FitDouble)->Unit(benchmark::kMicrosecond);

static void BM_SystemId(benchmark::State& state) {
  const ThermalParams p;
  const std::vector<double> u = excite(ExcitationConfig{});
  const std::vector<double> t = simulate_response(p, u, p.t_amb, 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(fit_linear(t, u, p.dt).params.alpha1);
}
BENCHMARK(BM_SystemId)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
