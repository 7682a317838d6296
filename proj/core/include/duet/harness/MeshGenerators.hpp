#pragma once

#include <cstdint>
#include <string>

#include "duet/mesh/Mesh.hpp"

namespace duet::harness {

/// Structured triangulation of [0,1]^2 with `cells` intervals per side;
/// z = 0 when dimensions == 3.
mesh::Mesh unitSquare(const std::string &name, int cells, int dimensions = 3);

/// unitSquare with every interior vertex moved by up to `jitter` cell widths
/// per coordinate; connectivity is kept.
mesh::Mesh perturbedSquare(const std::string &name, int cells, double jitter, std::uint64_t seed, int dimensions = 3);

/// n uniform random vertices in [0,1]^dimensions, no connectivity.
mesh::Mesh randomCloud(const std::string &name, int n, int dimensions, std::uint64_t seed);

} // namespace duet::harness
