#include <benchmark/benchmark.h>

#include <vector>

#include "floquetlab/floquet_matrix.hpp"
#include "floquetlab/number_theory.hpp"
#include "floquetlab/spectral_core.hpp"

namespace nt = floquetlab::number_theory;
namespace sp = floquetlab::spectral;
namespace fq = floquetlab::floquet;

namespace {

nt::SequenceSpec golden(int j) { return {j, floquetlab::golden_rotation(), "golden"}; }

void BM_SequencePoints(benchmark::State& state) {
  const auto spec = golden(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(nt::sequence_points(spec, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SequencePoints)->Args({100'000, 1})->Args({100'000, 3})->Args({1'000'000, 2});

void BM_Discrepancy(benchmark::State& state) {
  const auto points = nt::sequence_points(golden(2), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(nt::extreme_discrepancy(points));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Discrepancy)->Range(1 << 10, 1 << 20);

void BM_ErdosTuran(benchmark::State& state) {
  const auto points = nt::sequence_points(golden(1), 100'000);
  for (auto _ : state) benchmark::DoNotOptimize(nt::erdos_turan_bound(points, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ErdosTuran)->Arg(8)->Arg(64);

void BM_WeylSum(benchmark::State& state) {
  const auto spec = golden(2);
  for (auto _ : state) benchmark::DoNotOptimize(nt::weyl_sum(spec, 1, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WeylSum)->Range(1 << 10, 1 << 20);

void BM_EigenDecompose(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const std::vector<double> lambda = {1.0};
  const auto v = fq::build_floquet(sp::BaseSpectrum::harmonic(floquetlab::golden_rotation()),
                                   sp::orthonormal_ensemble(0.75, 1, dim, lambda), dim);
  for (auto _ : state) benchmark::DoNotOptimize(fq::eigen_decompose(v));
}
BENCHMARK(BM_EigenDecompose)->RangeMultiplier(2)->Range(16, 256)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
