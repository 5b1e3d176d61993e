#include <coevo/dynamics.hpp>
#include <coevo/rng.hpp>
#include <coevo/spectral.hpp>

#include <benchmark/benchmark.h>

namespace {

using namespace coevo;

Matrix random_symmetric(Index n, Pcg32& rng) {
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) m(i, j) = m(j, i) = rng.uniform(-1.0, 1.0);
  return m;
}

Vector random_vector(Index n, Pcg32& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.uniform(-1.0, 1.0);
  return v;
}

void BM_Eigh(benchmark::State& state) {
  Pcg32 rng(1);
  const SymmetricMatrix a(random_symmetric(state.range(0), rng));
  for (auto _ : state) benchmark::DoNotOptimize(eigh(a));
}
BENCHMARK(BM_Eigh)->RangeMultiplier(2)->Range(4, 64);

void BM_IntegrateToBlowup(benchmark::State& state) {
  Pcg32 rng(2);
  const Index n = state.range(0);
  const SystemState s0 = SystemState::scalar(random_vector(n, rng), random_symmetric(n, rng));
  const GraphTopology g = GraphTopology::complete(static_cast<std::size_t>(n));
  SimConfig cfg;
  cfg.blowup_threshold = 1e6;
  cfg.diagnostics = false;
  cfg.sample_every = 1'000'000;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(s0, g, cfg));
}
BENCHMARK(BM_IntegrateToBlowup)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_DiscreteStep(benchmark::State& state) {
  Pcg32 rng(3);
  const Index n = state.range(0);
  const SystemState s = SystemState::scalar(random_vector(n, rng), random_symmetric(n, rng));
  const GraphTopology g = GraphTopology::complete(static_cast<std::size_t>(n));
  for (auto _ : state) benchmark::DoNotOptimize(discrete_step(s, g, 0.01, 0.01));
}
BENCHMARK(BM_DiscreteStep)->RangeMultiplier(4)->Range(16, 256);

}  // namespace

BENCHMARK_MAIN();
