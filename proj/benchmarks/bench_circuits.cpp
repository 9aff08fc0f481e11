#include <benchmark/benchmark.h>

#include "nonclass/optical_circuits.hpp"

using namespace nonclass;

static void BM_circuit_d23_pure(benchmark::State& state) {
  const FockDensityOperator rho = make_state(squeezed_state(0.5), 32);
  for (auto _ : state)
    benchmark::DoNotOptimize(circuit_minor(MinorPreset::d23, rho));
}
BENCHMARK(BM_circuit_d23_pure);

static void BM_circuit_d123_thermal(benchmark::State& state) {
  const FockDensityOperator rho = make_state(thermal_state(0.5), 8);
  for (auto _ : state)
    benchmark::DoNotOptimize(circuit_minor(MinorPreset::d123, rho));
}
BENCHMARK(BM_circuit_d123_thermal);

static void BM_interpolation_pullback(benchmark::State& state) {
  const FockDensityOperator rho = make_state(squeezed_state(0.5), 64);
  double tau = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(interpolation_value_heisenberg(tau, M_PI / 2, rho));
    tau += 1.0 / 512;
    if (tau > 1.0) tau = 0.5;
  }
}
BENCHMARK(BM_interpolation_pullback);

static void BM_fock_unitary_3mode(benchmark::State& state) {
  const ModeUnitary u = compile_mode_unitary(CircuitSpec::fig4());
  for (auto _ : state) benchmark::DoNotOptimize(fock_unitary(u, 6, 3));
}
BENCHMARK(BM_fock_unitary_3mode);

BENCHMARK_MAIN();
