#include <benchmark/benchmark.h>

#include "nonclass/multicopy.hpp"

using namespace nonclass;

static void BM_build_b123(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_multicopy({1, 2, 3}));
}
BENCHMARK(BM_build_b123);

static void BM_build_b1235(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_multicopy({1, 2, 3, 5}));
}
BENCHMARK(BM_build_b1235);

static void BM_f1235_normal_square(benchmark::State& state) {
  const BosonPolynomial f = f1235();
  for (auto _ : state) benchmark::DoNotOptimize(nmul(f, f));
}
BENCHMARK(BM_f1235_normal_square);

static void BM_schwinger_commutator(benchmark::State& state) {
  const auto lx = schwinger(Schwinger::x, 0, 1);
  const auto ly = schwinger(Schwinger::y, 0, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(multiply(lx, ly) - multiply(ly, lx));
}
BENCHMARK(BM_schwinger_commutator);

static void BM_transform_f1235_dft(benchmark::State& state) {
  const BosonPolynomial f = f1235();
  Eigen::MatrixXcd h(4, 4);
  h << 1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1;
  const ModeUnitary u(0.5 * h);
  for (auto _ : state) benchmark::DoNotOptimize(transform_modes(f, u));
}
BENCHMARK(BM_transform_f1235_dft);

BENCHMARK_MAIN();
