#include <benchmark/benchmark.h>

#include "hurwitz/combinatorics.hpp"
#include "hurwitz/hyperbolic_solver.hpp"
#include "hurwitz/operators.hpp"
#include "hurwitz/surface_mesh.hpp"
#include "hurwitz/wp_geometry.hpp"

using namespace hurwitz;

namespace {

BranchConfiguration hexagon() {
  return roots_of_unity_configuration(make_datum(2, std::vector<std::pair<int, int>>(6, {1, 2})));
}

CoverSurface hexagon_cover(int refinement) {
  MeshOptions m;
  m.refinement = refinement;
  return build_cover(hexagon(), m);
}

void BM_Enumerate(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0)), b = static_cast<int>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_classes(n, b));
}
BENCHMARK(BM_Enumerate)->Args({3, 4})->Args({4, 6})->Args({4, 8})->Unit(benchmark::kMillisecond);

void BM_BraidOrbits(benchmark::State& st) {
  const auto classes = enumerate_classes(4, 6);
  for (auto _ : st) benchmark::DoNotOptimize(braid_orbits(classes));
}
BENCHMARK(BM_BraidOrbits)->Unit(benchmark::kMillisecond);

void BM_BuildCover(benchmark::State& st) {
  const auto cfg = hexagon();
  MeshOptions m;
  m.refinement = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(build_cover(cfg, m));
}
BENCHMARK(BM_BuildCover)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_SolveLiouville(benchmark::State& st) {
  const auto s = hexagon_cover(static_cast<int>(st.range(0)));
  const auto ops = assemble_operators(s);
  for (auto _ : st) benchmark::DoNotOptimize(solve_liouville(s, ops));
  st.counters["vertices"] = static_cast<double>(s.vertices.size());
}
BENCHMARK(BM_SolveLiouville)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_HarmonicBeltrami(benchmark::State& st) {
  const auto s = hexagon_cover(static_cast<int>(st.range(0)));
  const auto metric = solve_liouville(s, assemble_operators(s));
  const auto v = single_point_velocity(s, 0);
  for (auto _ : st) benchmark::DoNotOptimize(harmonic_beltrami(s, v, metric));
}
BENCHMARK(BM_HarmonicBeltrami)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_ComputeWP(benchmark::State& st) {
  const auto s = hexagon_cover(static_cast<int>(st.range(0)));
  const auto v = single_point_velocity(s, 0);
  for (auto _ : st) benchmark::DoNotOptimize(compute_wp(s, v));
}
BENCHMARK(BM_ComputeWP)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
