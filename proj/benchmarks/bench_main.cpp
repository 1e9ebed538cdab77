#include "owl/datagen.hpp"
#include "owl/norm.hpp"
#include "owl/rng.hpp"
#include "owl/solvers.hpp"
#include "owl/weights.hpp"

#include <benchmark/benchmark.h>

namespace {

owl::Vector gaussian(Eigen::Index p, std::uint64_t seed) {
  owl::CounterRng rng(seed, 0);
  owl::Vector v(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    v[i] = rng.normal_at(static_cast<std::uint64_t>(i));
  }
  return v;
}

void BM_OwlNorm(benchmark::State& state) {
  const auto p = state.range(0);
  const owl::Vector x = gaussian(p, 1);
  const owl::WeightVector w = owl::oscar_weights(static_cast<std::size_t>(p), 1.0, 0.01);
  for (auto _ : state) {
    benchmark::DoNotOptimize(owl::owl_norm(x, w));
  }
  state.SetComplexityN(p);
}
BENCHMARK(BM_OwlNorm)->RangeMultiplier(8)->Range(8, 1 << 15)->Complexity(benchmark::oNLogN);

void BM_ProxOwl(benchmark::State& state) {
  const auto p = state.range(0);
  const owl::Vector u = gaussian(p, 2);
  const owl::WeightVector w = owl::oscar_weights(static_cast<std::size_t>(p), 0.1, 0.5 / p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(owl::prox_owl(u, w).data());
  }
  state.SetComplexityN(p);
}
BENCHMARK(BM_ProxOwl)->RangeMultiplier(8)->Range(8, 1 << 15)->Complexity(benchmark::oNLogN);

owl::Dataset replication_data(Eigen::Index n, Eigen::Index q, double eps) {
  return owl::generate({owl::GroupStructure::contiguous(2 * q, q), n, 2, eps, 3});
}

// args: n, q (p = 2q)
void BM_SolveSqLagrangian(benchmark::State& state) {
  const owl::Dataset d = replication_data(state.range(0), state.range(1), 0.05);
  const owl::ProblemInstance prob(d.a, d.y, owl::oscar_weights(d.a.cols(), 1.0, 0.01),
                                  owl::Loss::SquaredL2);
  int iters = 0;
  for (auto _ : state) {
    const owl::Solution sol = owl::solve(prob);
    iters = sol.iterations;
    benchmark::DoNotOptimize(sol.x_hat.data());
  }
  state.counters["iterations"] = iters;
}
BENCHMARK(BM_SolveSqLagrangian)->Args({100, 16})->Args({400, 32})->Args({100, 256})
    ->Unit(benchmark::kMillisecond);

void BM_SolveAbsLagrangian(benchmark::State& state) {
  const owl::Dataset d = replication_data(state.range(0), state.range(1), 0.05);
  const owl::ProblemInstance prob(d.a, d.y, owl::oscar_weights(d.a.cols(), 1.0, 0.01),
                                  owl::Loss::AbsoluteL1);
  int iters = 0;
  for (auto _ : state) {
    const owl::Solution sol = owl::solve(prob);
    iters = sol.iterations;
    benchmark::DoNotOptimize(sol.x_hat.data());
  }
  state.counters["iterations"] = iters;
}
BENCHMARK(BM_SolveAbsLagrangian)->Args({100, 16})->Args({400, 32})
    ->Unit(benchmark::kMillisecond);

// The experiment's default form: absolute loss under an l1 residual bound.
void BM_SolveAbsConstrained(benchmark::State& state) {
  const owl::Dataset d = replication_data(state.range(0), state.range(1), 0.05);
  const owl::ProblemInstance prob(d.a, d.y, owl::oscar_weights(d.a.cols(), 1.0, 0.01),
                                  owl::Loss::AbsoluteL1, owl::Constrained{0.05});
  int iters = 0;
  for (auto _ : state) {
    const owl::Solution sol = owl::solve(prob);
    iters = sol.iterations;
    benchmark::DoNotOptimize(sol.x_hat.data());
  }
  state.counters["iterations"] = iters;
}
BENCHMARK(BM_SolveAbsConstrained)->Args({100, 16})->Args({400, 32})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
