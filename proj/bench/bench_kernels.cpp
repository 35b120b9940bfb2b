// Serial reference vs OpenMP paths for the hot kernels.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mfa/ensemble.hpp"
#include "mfa/kernels.hpp"
#include "mfa/oracle.hpp"

namespace {

mfa::WeightedGraph torus(std::size_t rows, std::size_t cols) {
  std::mt19937_64 rng(1);
  std::vector<mfa::Edge> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t v = r * cols + c;
      edges.push_back({v, r * cols + (c + 1) % cols, rng() & 1 ? 1.0 : -1.0});
      edges.push_back({v, ((r + 1) % rows) * cols + c, rng() & 1 ? 1.0 : -1.0});
    }
  }
  return mfa::WeightedGraph(rows * cols, std::move(edges));
}

mfa::Exec policy(const benchmark::State& state) {
  return state.range(0) == 0 ? mfa::Exec::serial : mfa::Exec::parallel;
}

void BM_CouplingProduct(benchmark::State& state) {
  const auto model = mfa::maxcut_to_ising(torus(200, 200));
  std::vector<double> x(model.size(), 0.5), out(model.size());
  for (auto _ : state) {
    mfa::kernels::coupling_product(model.couplings, x, out, policy(state));
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_CouplingProduct)->Arg(0)->Arg(1);

void BM_ExactGroundState(benchmark::State& state) {
  const auto model = mfa::maxcut_to_ising(torus(4, 5));
  for (auto _ : state) benchmark::DoNotOptimize(mfa::exact_ground_state(model, policy(state)));
}
BENCHMARK(BM_ExactGroundState)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Ensemble(benchmark::State& state) {
  const auto g = torus(10, 10);
  mfa::EnsembleOptions opts;
  opts.exec = policy(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mfa::run_trials(g, mfa::NoiseSpec{0.1, 1, 8}, mfa::QuantumAnnealConfig{}, opts));
  }
}
BENCHMARK(BM_Ensemble)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
