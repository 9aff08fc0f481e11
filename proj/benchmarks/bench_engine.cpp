#include <benchmark/benchmark.h>

#include "nonclass/minor_criteria.hpp"
#include "nonclass/multicopy.hpp"

using namespace nonclass;

static void BM_make_squeezed(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(make_state(squeezed_state(1.0), d));
}
BENCHMARK(BM_make_squeezed)->Arg(64)->Arg(192);

static void BM_make_squeezed_thermal(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(make_state(squeezed_thermal_state(0.5, 0.35), d));
}
BENCHMARK(BM_make_squeezed_thermal)->Arg(64)->Arg(128);

static void BM_moment_matrix_n6(benchmark::State& state) {
  const FockDensityOperator rho = make_state(squeezed_state(1.0), 192);
  for (auto _ : state) benchmark::DoNotOptimize(build_moment_matrix(rho, 6));
}
BENCHMARK(BM_moment_matrix_n6);

static void BM_all_table1_minors(benchmark::State& state) {
  const FockDensityOperator rho = make_state(squeezed_state(0.5), 96);
  const MomentMatrix m = build_moment_matrix(rho, 6);
  for (auto _ : state) {
    double acc = 0;
    acc += principal_minor(m, {1, 5}).value;
    acc += principal_minor(m, {2, 3}).value;
    acc += principal_minor(m, {1, 2, 3}).value;
    acc += principal_minor(m, {2, 3, 5}).value;
    acc += principal_minor(m, {1, 2, 3, 5}).value;
    acc += principal_minor(m, {1, 2, 3, 4, 5}).value;
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_all_table1_minors);

static void BM_multicopy_b1235_expectation(benchmark::State& state) {
  const MulticopyObservable b = build_multicopy({1, 2, 3, 5});
  const FockDensityOperator rho = make_state(squeezed_state(0.5), 14);
  for (auto _ : state) benchmark::DoNotOptimize(multicopy_expectation(rho, b));
}
BENCHMARK(BM_multicopy_b1235_expectation);

BENCHMARK_MAIN();
