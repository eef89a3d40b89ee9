#include <benchmark/benchmark.h>

#include "mfsim/cdyn.hpp"
#include "mfsim/ensemble.hpp"
#include "mfsim/observables.hpp"
#include "mfsim/qdyn.hpp"

using namespace mfsim;

static void BM_HaarSample(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qdyn::sample_haar_unitary(rng));
  }
}
BENCHMARK(BM_HaarSample);

static void BM_UnitaryLayer(benchmark::State& state) {
  const int length = static_cast<int>(state.range(0));
  const CircuitSchedule schedule{length, Boundary::OBC};
  Rng rng(2);
  Amplitudes psi = Amplitudes::delta(length, center_site(length));
  long t = 0;
  for (auto _ : state) {
    ++t;
    schedule.for_each_bond(t, [&](int left, int right) {
      qdyn::sample_haar_unitary(rng).apply(psi.values[left], psi.values[right]);
    });
    psi.normalize();
  }
  state.SetItemsProcessed(state.iterations() * (length / 2));
}
BENCHMARK(BM_UnitaryLayer)->Arg(64)->Arg(256)->Arg(1024);

static void BM_MeasurementLayer(benchmark::State& state) {
  const int length = static_cast<int>(state.range(0));
  Rng rng(3);
  Amplitudes psi = Amplitudes::uniform(length);
  const auto scheme = qdyn::MeasurementScheme::projective();
  for (auto _ : state) {
    Amplitudes copy = psi;
    benchmark::DoNotOptimize(qdyn::measurement_layer(copy, 1.0 / length, scheme, rng));
  }
}
BENCHMARK(BM_MeasurementLayer)->Arg(256)->Arg(1024);

static void BM_ClassicalTrajectory(benchmark::State& state) {
  const int length = static_cast<int>(state.range(0));
  cdyn::ClassicalProtocol protocol;
  protocol.length = length;
  protocol.steps = 8 * length;
  protocol.rate = 1.0 / length;
  long seed = 0;
  for (auto _ : state) {
    Rng rng = ensemble::derive_stream(4, length, seed++);
    benchmark::DoNotOptimize(cdyn::evolve_classical_trajectory(protocol, rng));
  }
}
BENCHMARK(BM_ClassicalTrajectory)->Arg(128)->Arg(512);

static void BM_IprGrid(benchmark::State& state) {
  const int length = static_cast<int>(state.range(0));
  Rng rng(5);
  ProbabilityVector dist;
  dist.values.resize(length);
  for (double& p : dist.values) p = rng.uniform_pos();
  dist.renormalize();
  observables::EnsembleStats stats(length, ensemble::default_q_grid(), {1, 2, 4, 8, 16});
  for (auto _ : state) {
    stats.accumulate(dist);
  }
}
BENCHMARK(BM_IprGrid)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
