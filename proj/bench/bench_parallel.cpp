// Serial reference kernels against their OpenMP counterparts.

#include "structid/cases.hpp"
#include "structid/combos.hpp"
#include "structid/linalg.hpp"
#include "structid/local_id.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace structid;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

Matrix<Fp> random_matrix(std::size_t n, std::size_t rank) {
  std::mt19937_64 rng(5);
  Matrix<Fp> a(n, rank), b(rank, n), m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < rank; ++k) a(i, k) = Fp(rng()), b(k, i) = Fp(rng());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Fp s(0);
      for (std::size_t k = 0; k < rank; ++k) s = s + a(i, k) * b(k, j);
      m(i, j) = s;
    }
  return m;
}

void BM_rank(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto m = random_matrix(n, n - 3);
  for (auto _ : state) benchmark::DoNotOptimize(state.range(0) ? rank_parallel(m) : rank(m));
}
BENCHMARK(BM_rank)->ArgsProduct({{0, 1}, {64, 256, 512}})->ArgNames({"parallel", "n"})->Unit(benchmark::kMillisecond);

void BM_classify_columns(benchmark::State& state) {
  const ModelIR model = corpus_case("seirh_both").model();
  const auto m = build_sensitivity_matrix(model, kDefaultSeed, default_order(model) + 10);
  for (auto _ : state) benchmark::DoNotOptimize(classify_columns(m, mode(state)));
}
BENCHMARK(BM_classify_columns)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_combination_search(benchmark::State& state) {
  const ModelIR model = corpus_case("siwr").model();
  CombosOptions o;
  o.execution = mode(state);
  o.degree_bound = 3;
  for (auto _ : state) benchmark::DoNotOptimize(find_identifiable_combinations(model, o));
}
BENCHMARK(BM_combination_search)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
