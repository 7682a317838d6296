#include "duet/api/Watchpoint.hpp"

#include <fmt/format.h>

#include "duet/Error.hpp"
#include "duet/mesh/SpatialIndex.hpp"

namespace duet {

Watchpoint::Watchpoint(std::string name, const mesh::Mesh &mesh, const mesh::Vector3 &coordinate,
                       std::vector<Column> columns, const std::filesystem::path &directory)
    : _name(std::move(name)), _columns(std::move(columns))
{
  if (mesh.empty()) {
    throw Error(fmt::format("watch-point \"{}\": mesh \"{}\" has no vertices", _name, mesh.name()));
  }
  _vertex = mesh::SpatialIndex(mesh).nearestVertex(coordinate);
  std::filesystem::create_directories(directory);
  const auto path = directory / (_name + ".csv");
  _out.open(path, std::ios::trunc);
  if (!_out) {
    throw Error(fmt::format("watch-point \"{}\": cannot write {}", _name, path.string()));
  }
  static const char *axes = "xyz";
  _out << "time";
  for (const auto &column : _columns) {
    if (column.components == 1) {
      _out << ',' << column.name;
    } else {
      for (int c = 0; c < column.components; ++c) {
        _out << ',' << column.name << '_' << axes[c];
      }
    }
  }
  _out << '\n';
  _out.flush();
}

void Watchpoint::record(double time, const std::vector<const Eigen::VectorXd *> &values)
{
  if (values.size() != _columns.size()) {
    throw Error(fmt::format("watch-point \"{}\": expected {} fields, got {}", _name, _columns.size(), values.size()));
  }
  _out << fmt::format("{:.17g}", time);
  for (std::size_t i = 0; i < _columns.size(); ++i) {
    const int k = _columns[i].components;
    for (int c = 0; c < k; ++c) {
      _out << fmt::format(",{:.17g}", (*values[i])[static_cast<Eigen::Index>(_vertex) * k + c]);
    }
  }
  _out << '\n';
  _out.flush();
  if (!_out) {
    throw Error(fmt::format("watch-point \"{}\": write failed", _name));
  }
}

} // namespace duet
