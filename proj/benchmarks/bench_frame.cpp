#include <benchmark/benchmark.h>

#include "duet/com/Frame.hpp"
#include "duet/harness/MeshGenerators.hpp"

using namespace duet;

namespace {

com::FieldData field(int64_t n)
{
  return {"Forces", "Fluid-Mesh", 3, Eigen::VectorXd::LinSpaced(n * 3, -1.0, 1.0)};
}

void encodeField(benchmark::State &state)
{
  const auto frame = com::makeFieldFrame(field(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(com::encodeFrame(frame));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(frame.payload.size()));
}

void decodeField(benchmark::State &state)
{
  const auto bytes = com::encodeFrame(com::makeFieldFrame(field(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(com::readFieldFrame(com::decodeFrame(bytes)));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(bytes.size()));
}

void meshRoundTrip(benchmark::State &state)
{
  const auto m = harness::unitSquare("M", static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(com::readMeshFrame(com::decodeFrame(com::encodeFrame(com::makeMeshFrame(m)))));
  }
}

} // namespace

BENCHMARK(encodeField)->RangeMultiplier(10)->Range(100, 1000000);
BENCHMARK(decodeField)->RangeMultiplier(10)->Range(100, 1000000);
BENCHMARK(meshRoundTrip)->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMicrosecond);
