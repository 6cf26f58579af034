// Parallel kernels against their serial references, plus Metropolis throughput.

#include "tst/exact/binder.hpp"
#include "tst/exact/brute_force.hpp"
#include "tst/mc/metropolis.hpp"

#include <benchmark/benchmark.h>

#include <complex>

using namespace tst;

namespace {

const std::complex<double> kJ{0.2, 0.1};

model::MassFieldModel nn_model() {
  model::MassFieldModel mm;
  mm.j = kJ;
  return mm;
}

void BM_BruteForce(benchmark::State& state) {
  const model::LatticeGeometry geom(static_cast<int>(state.range(0)), 2);
  const auto mm = nn_model();
  for (auto _ : state) benchmark::DoNotOptimize(exact::brute_force(geom, mm, 0.8));
}

void BM_BruteForceReference(benchmark::State& state) {
  const model::LatticeGeometry geom(static_cast<int>(state.range(0)), 2);
  const auto mm = nn_model();
  for (auto _ : state) benchmark::DoNotOptimize(exact::brute_force_reference(geom, mm, 0.8));
}

void BM_Binder(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const model::LatticeGeometry geom(n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact::binder_partition(geom, kJ, 0.8, exact::kRepresentatives[1].pattern));
  }
}

void BM_BinderReference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const model::LatticeGeometry geom(n, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        exact::binder_partition_reference(geom, kJ, 0.8, exact::kRepresentatives[1].pattern));
  }
}

void BM_BinderAmplitudes(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const model::LatticeGeometry geom(n, n);
  exact::BinderOptions opts;
  opts.parallel = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(exact::binder_amplitudes(geom, kJ, 0.8, opts));
}

void BM_MetropolisSweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const model::LatticeGeometry geom(n, n);
  model::MassFieldModel mm;
  mm.long_range = state.range(1) != 0;
  mm.fbar_ratio = mm.long_range ? 0.72 : 0.0;
  const model::CompiledModel compiled(geom, mm);
  mc::MetropolisChain chain(compiled, 0.8, 1);
  for (auto _ : state) benchmark::DoNotOptimize(chain.sweep());
  state.SetItemsProcessed(state.iterations() * chain.num_variables());
}

} // namespace

BENCHMARK(BM_BruteForce)->DenseRange(3, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForceReference)->DenseRange(3, 4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Binder)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);
// the reference recursion needs minutes at width 8
BENCHMARK(BM_BinderReference)->DenseRange(4, 6, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BinderAmplitudes)->ArgsProduct({{6, 8}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MetropolisSweep)->ArgsProduct({{4, 8, 16}, {0, 1}});

BENCHMARK_MAIN();
