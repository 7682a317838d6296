#include "duet/harness/TestFunctions.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <vector>

#include "duet/Error.hpp"

namespace duet::harness {

double cosineFunction(const mesh::Vector3 &x)
{
  return 0.78 * std::cos(10.0 * (x.x() + x.y() + x.z()));
}

namespace {

std::vector<double> numbers(std::string_view list, std::string_view spec)
{
  std::vector<double> out;
  while (!list.empty()) {
    const auto  comma = list.find(',');
    const auto  item  = list.substr(0, comma);
    double      value = 0.0;
    const auto *end   = item.data() + item.size();
    auto [ptr, ec]    = std::from_chars(item.data(), end, value);
    if (ec != std::errc() || ptr != end || item.empty()) {
      throw Error(fmt::format("bad number \"{}\" in function \"{}\"", item, spec));
    }
    out.push_back(value);
    list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
  }
  return out;
}

} // namespace

mapping::TestFunction testFunction(std::string_view spec)
{
  if (spec == "cosine") {
    return cosineFunction;
  }
  if (spec.rfind("constant:", 0) == 0) {
    const auto v = numbers(spec.substr(9), spec);
    if (v.size() != 1) {
      throw Error(fmt::format("constant function takes one value, got \"{}\"", spec));
    }
    return AffineFunction{v[0], mesh::Vector3::Zero()};
  }
  if (spec.rfind("affine:", 0) == 0) {
    const auto v = numbers(spec.substr(7), spec);
    if (v.size() != 3 && v.size() != 4) {
      throw Error(fmt::format("affine function takes c,gx,gy[,gz], got \"{}\"", spec));
    }
    return AffineFunction{v[0], mesh::Vector3(v[1], v[2], v.size() == 4 ? v[3] : 0.0)};
  }
  throw Error(fmt::format("unknown function \"{}\" (expected cosine, constant:c or affine:c,gx,gy[,gz])", spec));
}

} // namespace duet::harness
