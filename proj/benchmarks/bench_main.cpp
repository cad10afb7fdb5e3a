// Microbenchmarks for the per-step hot paths: raw and mollified kernel
// evaluation, empirical field assembly, the matrix square root, one full
// explicit step, and the exact assignment solver.

#include <benchmark/benchmark.h>

#include <vector>

#include "landau/coupling.hpp"
#include "landau/ensemble.hpp"
#include "landau/kernel.hpp"
#include "landau/matrix3.hpp"
#include "landau/rng.hpp"
#include "landau/sim.hpp"

using namespace landau;

namespace {

std::vector<Vec3> cloud(std::size_t n, std::uint64_t seed) {
  return sample_cloud(IsotropicGaussian{1.0}, n, seed);
}

void BM_eval_a(benchmark::State& state) {
  SeqRng rng(1);
  std::vector<Vec3> vs = cloud(1024, 2);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_a(-1.0, vs[i]));
    i = (i + 1) % vs.size();
  }
}
BENCHMARK(BM_eval_a);

void BM_eval_b_mollified(benchmark::State& state) {
  KernelParams p{-1.0, 0.05, static_cast<int>(state.range(0))};
  std::vector<Vec3> vs = cloud(1024, 3);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_b_mollified(p, vs[i]));
    i = (i + 1) % vs.size();
  }
}
BENCHMARK(BM_eval_b_mollified)->Arg(2)->Arg(8)->Arg(64);

void BM_field_ab(benchmark::State& state) {
  KernelParams p{-1.0, 0.05, 2};
  Ensemble e;
  e.velocities = cloud(static_cast<std::size_t>(state.range(0)), 5);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(field_ab(p, e, e.velocities[i]));
    i = (i + 1) % e.size();
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_field_ab)->Arg(64)->Arg(256)->Arg(1024)->Complexity();

void BM_sqrt_psd(benchmark::State& state) {
  SeqRng rng(7);
  std::vector<SymMat3> ms;
  for (int i = 0; i < 256; ++i) {
    Vec3 v = rng.normal3();
    ms.push_back(SymMat3::outer(v) + SymMat3::identity() * 0.1);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mat3::sqrt_psd(ms[i]));
    i = (i + 1) % ms.size();
  }
}
BENCHMARK(BM_sqrt_psd);

void BM_step_em(benchmark::State& state) {
  KernelParams p{-1.0, 0.05, 2};
  Ensemble e;
  e.velocities = cloud(static_cast<std::size_t>(state.range(0)), 11);
  CounterNoise noise(1, 0);
  std::uint64_t step = 0;
  for (auto _ : state) {
    noise.set_step(step++);
    e = step_em(e, p, 1e-3, noise);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_step_em)->Arg(64)->Arg(256)->Complexity();

void BM_assignment(benchmark::State& state) {
  auto X = cloud(static_cast<std::size_t>(state.range(0)), 13);
  auto Y = cloud(static_cast<std::size_t>(state.range(0)), 17);
  for (auto _ : state)
    benchmark::DoNotOptimize(optimal_assignment_w2(X, Y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_assignment)->Arg(64)->Arg(256)->Arg(512)->Complexity();

}  // namespace

BENCHMARK_MAIN();
