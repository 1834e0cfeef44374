#include <benchmark/benchmark.h>

#include "sigmaeq/census.hpp"
#include "sigmaeq/char_sums.hpp"
#include "sigmaeq/sieve.hpp"
#include "sigmaeq/variety.hpp"

using namespace sigmaeq;

static void BM_BuildSieve(benchmark::State& state) {
  SieveOptions opts;
  opts.parallelism = Parallelism{1};
  for (auto _ : state) {
    auto sieve = build_sieve(static_cast<u64>(state.range(0)), opts);
    benchmark::DoNotOptimize(sieve);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildSieve)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_Census(benchmark::State& state) {
  const u64 x = static_cast<u64>(state.range(0));
  SieveOptions opts;
  opts.parallelism = Parallelism{1};
  const auto sieve = build_sieve(x, opts);
  const Modulus m(15);
  for (auto _ : state) {
    auto r = census(x, m, CensusFilter::all(), sieve, Parallelism{1});
    benchmark::DoNotOptimize(r.total_coprime);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Census)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_VCount(benchmark::State& state) {
  const Modulus m(static_cast<u64>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(v_count(m, 1, 2).count);
}
BENCHMARK(BM_VCount)->Arg(1001)->Arg(510510)->Arg(9699690);

static void BM_RhoBrute(benchmark::State& state) {
  const auto chars = enumerate_characters(Modulus(static_cast<u64>(state.range(0))));
  for (auto _ : state)
    for (const auto& chi : chars) benchmark::DoNotOptimize(rho_brute(chi).value);
}
BENCHMARK(BM_RhoBrute)->Arg(105)->Arg(499);
BENCHMARK_MAIN();
