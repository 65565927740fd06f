#include <benchmark/benchmark.h>

#include <cmath>

#include "qthermo/dynamics.hpp"
#include "qthermo/eig.hpp"
#include "qthermo/experiments.hpp"
#include "qthermo/gauge.hpp"
#include "qthermo/numerics.hpp"
#include "qthermo/random.hpp"
#include "qthermo/thermo.hpp"

namespace {

using namespace qthermo;

ComplexMatrix random_hermitian(int dim, RandomStream& rng) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) {
    m(i, i) = rng.gaussian();
    for (int j = i + 1; j < dim; ++j) {
      const Complex z = rng.complex_gaussian();
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return m;
}

void BM_HermitianEig(benchmark::State& state) {
  RandomStream rng(11);
  const ComplexMatrix m = random_hermitian(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(m));
}
BENCHMARK(BM_HermitianEig)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_HaarUnitary(benchmark::State& state) {
  RandomStream rng(12);
  for (auto _ : state)
    benchmark::DoNotOptimize(haar_unitary(static_cast<int>(state.range(0)), rng));
}
BENCHMARK(BM_HaarUnitary)->Arg(2)->Arg(4)->Arg(8);

void BM_DrivenQubitEvolve(benchmark::State& state) {
  const LindbladModel model{builtin_driven_qubit([](double t) { return std::cos(t); },
                                                 [](double t) { return -std::sin(t); }),
                            {}};
  const DensityMatrix rho0 = DensityMatrix::pure(model.hamiltonian.decompose(0.0).frame.column(0));
  const double tau = static_cast<double>(state.range(0)) * 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(evolve(model, rho0, tau, 1e-3));
}
BENCHMARK(BM_DrivenQubitEvolve)->Arg(10)->Arg(60);

void BM_LedgerDrivenQubit(benchmark::State& state) {
  const LindbladModel model{builtin_driven_qubit([](double t) { return std::cos(t); },
                                                 [](double t) { return -std::sin(t); }),
                            {}};
  const DensityMatrix rho0 = DensityMatrix::pure(model.hamiltonian.decompose(0.0).frame.column(0));
  const Trajectory traj = evolve(model, rho0, 2.0, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(compute_ledger(traj));
}
BENCHMARK(BM_LedgerDrivenQubit);

void BM_GroupAveragedWork(benchmark::State& state) {
  const DegenerateSystem system = make_degenerate_four_level(DegenerateSystemConfig{}, 21);
  const Trajectory traj = evolve(system.model, system.initial_state, 1.0, 1e-2);
  for (auto _ : state) {
    RandomStream rng(22);
    benchmark::DoNotOptimize(group_averaged_work(traj, static_cast<int>(state.range(0)), rng));
  }
}
BENCHMARK(BM_GroupAveragedWork)->Arg(100)->Arg(400);

void BM_BlockTwirl(benchmark::State& state) {
  RandomStream rng(23);
  const ComplexMatrix m = random_hermitian(4, rng);
  GaugeStructure s;
  s.block_sizes = {2, 2};
  s.frame = ComplexMatrix::identity(4);
  for (auto _ : state) {
    RandomStream sample_rng(24);
    benchmark::DoNotOptimize(block_average_oracle(m, s, 1000, sample_rng));
  }
}
BENCHMARK(BM_BlockTwirl);

}  // namespace

BENCHMARK_MAIN();
