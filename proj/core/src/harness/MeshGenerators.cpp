#include "duet/harness/MeshGenerators.hpp"

#include <fmt/format.h>
#include <random>

#include "duet/Error.hpp"

namespace duet::harness {

namespace {

void triangulate(mesh::Mesh &m, int cells)
{
  const int stride = cells + 1;
  for (int j = 0; j < cells; ++j) {
    for (int i = 0; i < cells; ++i) {
      const int a = j * stride + i;
      m.addTriangle(a, a + 1, a + stride + 1);
      m.addTriangle(a, a + stride + 1, a + stride);
    }
  }
}

} // namespace

mesh::Mesh unitSquare(const std::string &name, int cells, int dimensions)
{
  return perturbedSquare(name, cells, 0.0, 0, dimensions);
}

mesh::Mesh perturbedSquare(const std::string &name, int cells, double jitter, std::uint64_t seed, int dimensions)
{
  if (cells < 1) {
    throw Error(fmt::format("unit square needs at least one cell, got {}", cells));
  }
  if (dimensions != 2 && dimensions != 3) {
    throw Error(fmt::format("unit square in {} dimensions", dimensions));
  }
  std::mt19937_64                        rng(seed);
  std::uniform_real_distribution<double> shift(-jitter, jitter);
  const double                           h = 1.0 / cells;
  mesh::Mesh                             m(name, dimensions);
  for (int j = 0; j <= cells; ++j) {
    for (int i = 0; i <= cells; ++i) {
      mesh::Vector3 p(i * h, j * h, 0.0);
      if (jitter > 0.0 && i > 0 && i < cells && j > 0 && j < cells) {
        p.x() += shift(rng) * h;
        p.y() += shift(rng) * h;
      }
      m.addVertex(p);
    }
  }
  triangulate(m, cells);
  return m;
}

mesh::Mesh randomCloud(const std::string &name, int n, int dimensions, std::uint64_t seed)
{
  std::mt19937_64                        rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  mesh::Mesh                             m(name, dimensions);
  for (int k = 0; k < n; ++k) {
    mesh::Vector3 p = mesh::Vector3::Zero();
    for (int d = 0; d < dimensions; ++d) {
      p[d] = unit(rng);
    }
    m.addVertex(p);
  }
  return m;
}

} // namespace duet::harness
