#include <benchmark/benchmark.h>

#include "nestedot/nested_dp.hpp"
#include "nestedot/process_lab.hpp"

namespace {

// Fake Brownian motion against Brownian motion at (0.1, 0.5, 1), the
// workload behind the bench subcommand.
void FullHistoryRecursion(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto threads = static_cast<std::size_t>(state.range(1));
  auto mu = nestedot::sample(nestedot::fake_bm_spec(0.1, 0.5), n, 1);
  auto nu = nestedot::sample(nestedot::bm_spec({0.1, 0.5, 1.0}), n, 2);
  nestedot::AwConfig config;
  config.threads = threads;
  for (auto _ : state) benchmark::DoNotOptimize(nestedot::compute_aw2(mu, nu, config).aw2_squared);
}
BENCHMARK(FullHistoryRecursion)
    ->ArgsProduct({{500, 1000, 2000}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond);

void MarkovRecursion(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto mu = nestedot::sample(nestedot::ou_spec(1.0, 5), n, 3);
  auto nu = nestedot::sample(nestedot::ou_spec(3.0, 5), n, 4);
  nestedot::AwConfig config;
  config.mode = nestedot::TreeMode::Markov;
  for (auto _ : state) benchmark::DoNotOptimize(nestedot::compute_aw2(mu, nu, config).aw2_squared);
}
BENCHMARK(MarkovRecursion)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
