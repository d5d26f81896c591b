#include <benchmark/benchmark.h>

#include "nkls/experiment.hpp"
#include "nkls/landscape.hpp"
#include "nkls/search.hpp"

using namespace nkls;

namespace {

void BM_GenerateLandscape(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  Landscape ls;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    generate_landscape_into(ls, 16, k, DependencyScheme::kRandom, seed++);
    benchmark::DoNotOptimize(ls.table(0).data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ls.total_entries()));
}
BENCHMARK(BM_GenerateLandscape)->Arg(0)->Arg(4)->Arg(8)->Arg(15);

void BM_OverallFitness(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Landscape ls = generate_landscape(16, k, DependencyScheme::kRandom, 7);
  SplitMix64 rng(3);
  const Configuration c = random_config(16, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ls.overall_fitness(c));
  }
}
BENCHMARK(BM_OverallFitness)->Arg(0)->Arg(4)->Arg(15);

void BM_CandidateDelta(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const Landscape ls = generate_landscape(16, k, DependencyScheme::kRandom, 7);
  SplitMix64 rng(3);
  IncrementalEvaluator eval(ls, random_config(16, rng));
  int node = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval.candidate_delta(node));
    node = (node + 1) & 15;
  }
}
BENCHMARK(BM_CandidateDelta)->Arg(0)->Arg(4)->Arg(15);

void BM_SmmlsWalk(benchmark::State& state) {
  const Landscape ls = generate_landscape(16, 8, DependencyScheme::kRandom, 11);
  SplitMix64 start_rng(1);
  const Configuration start = random_config(16, start_rng);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    SplitMix64 rng(seed++);
    benchmark::DoNotOptimize(run_smmls(ls, start, Meter{1000}, rng));
  }
}
BENCHMARK(BM_SmmlsWalk);

void BM_ImmlsToEquilibrium(benchmark::State& state) {
  const Landscape ls = generate_landscape(16, 8, DependencyScheme::kRandom, 11);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    SplitMix64 start_rng(seed++);
    const Configuration start = random_config(16, start_rng);
    benchmark::DoNotOptimize(run_immls(ls, start, Meter{1ull << 16}));
  }
}
BENCHMARK(BM_ImmlsToEquilibrium);

void BM_EnumerateGlobalOptimum(benchmark::State& state) {
  const Landscape ls = generate_landscape(16, 6, DependencyScheme::kRandom, 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_global_optimum(ls));
  }
}
BENCHMARK(BM_EnumerateGlobalOptimum);

void BM_RunBatch(benchmark::State& state) {
  ExperimentSpec spec;
  spec.n = 16;
  spec.k = 4;
  spec.algorithm = Algorithm::kBoth;
  spec.budget_t = 100;
  spec.iterations = 200;
  spec.master_seed = 5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_batch(spec, 1));
  }
}
BENCHMARK(BM_RunBatch);

}  // namespace

BENCHMARK_MAIN();
