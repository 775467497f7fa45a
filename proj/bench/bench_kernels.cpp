// Serial reference vs OpenMP kernels for grid classification and the
// parameter plane. Run with OMP_NUM_THREADS to vary the worker count.

#include <benchmark/benchmark.h>

#include "carpet/dynamics.hpp"
#include "carpet/metrics.hpp"
#include "carpet/raster.hpp"

namespace {

const carpet::MapSpec kCarpetMap = carpet::MapSpec::mcmullen(3, {0.02772313, 0.0});

void BM_ClassifyReference(benchmark::State& state) {
  const auto grid = carpet::square_grid(-1.6, 1.6, static_cast<int>(state.range(0)), 500);
  for (auto _ : state) benchmark::DoNotOptimize(carpet::classify_grid_reference(kCarpetMap, grid));
  state.SetItemsProcessed(state.iterations() * grid.pixel_count());
}

void BM_ClassifyParallel(benchmark::State& state) {
  const auto grid = carpet::square_grid(-1.6, 1.6, static_cast<int>(state.range(0)), 500);
  for (auto _ : state) benchmark::DoNotOptimize(carpet::classify_grid(kCarpetMap, grid));
  state.SetItemsProcessed(state.iterations() * grid.pixel_count());
}

void BM_ParamPlaneReference(benchmark::State& state) {
  const auto region = carpet::square_grid(-0.4, 0.4, static_cast<int>(state.range(0)), 500);
  for (auto _ : state) benchmark::DoNotOptimize(carpet::classify_parameter_plane_reference(3, region));
  state.SetItemsProcessed(state.iterations() * region.pixel_count());
}

void BM_ParamPlaneParallel(benchmark::State& state) {
  const auto region = carpet::square_grid(-0.4, 0.4, static_cast<int>(state.range(0)), 500);
  for (auto _ : state) benchmark::DoNotOptimize(carpet::classify_parameter_plane(3, region));
  state.SetItemsProcessed(state.iterations() * region.pixel_count());
}

void BM_QuasicircleCircle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<carpet::Complex> polygon;
  for (int i = 0; i < n; ++i) polygon.push_back(std::polar(1.0, 2.0 * 3.141592653589793 * i / n));
  for (auto _ : state) benchmark::DoNotOptimize(carpet::quasicircle_constant(polygon, 2'000'000));
}

}  // namespace

BENCHMARK(BM_ClassifyReference)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassifyParallel)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParamPlaneReference)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParamPlaneParallel)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuasicircleCircle)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
