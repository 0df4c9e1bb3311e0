#include <benchmark/benchmark.h>

#include <vector>

#include "wasb/chaos.hpp"
#include "wasb/gaussian_field.hpp"
#include "wasb/generator.hpp"
#include "wasb/rng.hpp"
#include "wasb/simulator.hpp"
#include "wasb/spectral.hpp"

namespace {

void BM_GridToSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  wasb::CounterRng rng(1, 0);
  const auto u = wasb::sample_mu_eps(n, rng);
  const int grid = wasb::default_grid_size(n);
  for (auto _ : state) {
    auto g = wasb::to_grid(u, grid);
    benchmark::DoNotOptimize(wasb::from_grid(g, n));
  }
}
BENCHMARK(BM_GridToSpectrum)->RangeMultiplier(2)->Range(16, 512);

void BM_Drift(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  wasb::CounterRng rng(2, 0);
  const auto u = wasb::sample_mu_eps(n, rng);
  wasb::DriftEvaluator eval(n, wasb::Polynomial({0, 0, 1}), 1.0);
  wasb::FourierField out(n);
  for (auto _ : state) {
    eval.evaluate(u, out);
    benchmark::DoNotOptimize(out.coeffs().data());
  }
}
BENCHMARK(BM_Drift)->RangeMultiplier(2)->Range(16, 512);

void BM_Step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  wasb::SimConfig cfg;
  cfg.N = n;
  cfg.F = wasb::Polynomial({0, 0, 1});
  cfg.T = 1.0;
  cfg.finalize();
  wasb::CounterRng rng(3, 0);
  auto u = wasb::sample_mu_eps(n, rng);
  for (auto _ : state) {
    u = wasb::step(u, cfg, rng);
    benchmark::DoNotOptimize(u.coeffs().data());
  }
}
BENCHMARK(BM_Step)->RangeMultiplier(2)->Range(16, 256);

void BM_ChaosEvaluate(benchmark::State& state) {
  const int terms = static_cast<int>(state.range(0));
  wasb::CounterRng rng(4, 0);
  const auto phi = wasb::random_functional(8, 4, terms, rng, true);
  const auto eta = wasb::sample_mu_eps(8, rng);
  for (auto _ : state) benchmark::DoNotOptimize(wasb::evaluate(phi, eta));
}
BENCHMARK(BM_ChaosEvaluate)->RangeMultiplier(4)->Range(4, 256);

void BM_ApplyGenerator(benchmark::State& state) {
  const int terms = static_cast<int>(state.range(0));
  wasb::CounterRng rng(5, 0);
  const auto phi = wasb::random_functional(8, 3, terms, rng, true);
  for (auto _ : state) benchmark::DoNotOptimize(wasb::apply_generator(phi));
}
BENCHMARK(BM_ApplyGenerator)->RangeMultiplier(4)->Range(4, 64);

}  // namespace

BENCHMARK_MAIN();
