#include <benchmark/benchmark.h>

#include "duet/harness/MeshGenerators.hpp"
#include "duet/harness/TestFunctions.hpp"
#include "duet/mapping/MappingOperator.hpp"
#include "duet/mesh/SpatialIndex.hpp"

using namespace duet;

namespace {

// Source mesh with range(0) cells per side, target slightly finer.
struct Meshes {
  explicit Meshes(const benchmark::State &state)
      : a(harness::unitSquare("A", static_cast<int>(state.range(0))))
      , b(harness::perturbedSquare("B", static_cast<int>(state.range(0)) + 3, 0.2, 1))
  {
  }
  mesh::Mesh a, b;
};

void nearestNeighbor(benchmark::State &state)
{
  const Meshes m(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mapping::buildNearestNeighbor(m.a, m.b, mapping::Constraint::Consistent));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m.b.vertexCount()));
}

void nearestProjection(benchmark::State &state)
{
  const Meshes m(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mapping::buildNearestProjection(m.a, m.b, mapping::Constraint::Consistent));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m.b.vertexCount()));
}

void compactRbf(benchmark::State &state)
{
  const Meshes m(state);
  const auto   basis = mapping::RadialBasis::compactThinPlateSplinesC2(5.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mapping::buildRadialBasis(m.a, m.b, mapping::Constraint::Consistent, basis,
                                                       mapping::Polynomial::Separated));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(m.a.vertexCount()));
}

void compactRbfApply(benchmark::State &state)
{
  const Meshes m(state);
  const auto   basis = mapping::RadialBasis::compactThinPlateSplinesC2(5.0 / static_cast<double>(state.range(0)));
  const auto   op    = mapping::buildRadialBasis(m.a, m.b, mapping::Constraint::Consistent, basis,
                                                 mapping::Polynomial::Separated);
  Eigen::VectorXd f(m.a.vertexCount());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    f[i] = harness::cosineFunction(m.a.vertex(static_cast<int>(i)));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.apply(f));
  }
}

void globalTps(benchmark::State &state)
{
  const Meshes m(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mapping::buildRadialBasis(m.a, m.b, mapping::Constraint::Consistent,
                                                       mapping::RadialBasis::thinPlateSplines(),
                                                       mapping::Polynomial::Separated));
  }
}

void nearestVertexQuery(benchmark::State &state)
{
  const auto         a = harness::randomCloud("A", static_cast<int>(state.range(0)), 3, 1);
  const auto         q = harness::randomCloud("Q", 1000, 3, 2);
  mesh::SpatialIndex index(a);
  for (auto _ : state) {
    for (int i = 0; i < 1000; ++i) {
      benchmark::DoNotOptimize(index.nearestVertex(q.vertex(i)));
    }
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}

} // namespace

BENCHMARK(nearestNeighbor)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);
BENCHMARK(nearestProjection)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);
BENCHMARK(compactRbf)->RangeMultiplier(2)->Range(16, 64)->Unit(benchmark::kMillisecond);
BENCHMARK(compactRbfApply)->RangeMultiplier(2)->Range(16, 64)->Unit(benchmark::kMicrosecond);
BENCHMARK(globalTps)->DenseRange(8, 24, 8)->Unit(benchmark::kMillisecond);
BENCHMARK(nearestVertexQuery)->RangeMultiplier(10)->Range(1000, 100000)->Unit(benchmark::kMicrosecond);
