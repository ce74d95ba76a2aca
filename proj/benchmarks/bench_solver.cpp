#include <benchmark/benchmark.h>

#include <random>

#include "nestedot/discrete_ot.hpp"

namespace {

nestedot::CostMatrix random_squared_costs(std::size_t m, std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> x(m), y(n);
  for (double& v : x) v = normal(rng);
  for (double& v : y) v = normal(rng);
  nestedot::CostMatrix c(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) c(i, j) = (x[i] - y[j]) * (x[i] - y[j]) + 0.1 * normal(rng) * normal(rng);
  return c;
}

void ExactSolverSquare(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  auto c = random_squared_costs(n, n, rng);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c(i, j) = std::abs(c(i, j));
  std::vector<std::int64_t> supply(n, 1), demand(n, 1);
  nestedot::ExactSolver solver;
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(std::span<const std::int64_t>(supply),
                                                             std::span<const std::int64_t>(demand), c));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(ExactSolverSquare)->RangeMultiplier(2)->Range(4, 512)->Complexity();

void Sorted1d(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  std::vector<double> x(n), y(n);
  for (double& v : x) v = normal(rng);
  for (double& v : y) v = normal(rng);
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::vector<std::int64_t> w(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(nestedot::sorted_1d_value(x, w, y, w));
}
BENCHMARK(Sorted1d)->RangeMultiplier(4)->Range(4, 4096);

}  // namespace
