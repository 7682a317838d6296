#pragma once

#include <string>
#include <string_view>

#include "duet/mapping/MappingOperator.hpp"

namespace duet::harness {

/// f(x) = 0.78 cos(10 (x + y + z)), the mapping-accuracy test function.
double cosineFunction(const mesh::Vector3 &x);

/// f(x) = c + g . x
struct AffineFunction {
  double       constant = 0.0;
  mesh::Vector3 gradient = mesh::Vector3::Zero();

  double operator()(const mesh::Vector3 &x) const { return constant + gradient.dot(x); }
};

/// Parses "cosine", "constant:c" or "affine:c,gx,gy[,gz]".
mapping::TestFunction testFunction(std::string_view spec);

} // namespace duet::harness
