#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "duet/mesh/Mesh.hpp"

namespace duet {

/// Logs the values at the vertex nearest to a probe coordinate, one CSV row
/// per completed time window: "time,<column>,...".
class Watchpoint {
public:
  struct Column {
    std::string name;
    int         components = 1;
  };

  Watchpoint(std::string name, const mesh::Mesh &mesh, const mesh::Vector3 &coordinate, std::vector<Column> columns,
             const std::filesystem::path &directory);

  const std::string &name() const { return _name; }
  mesh::VertexID     vertex() const { return _vertex; }
  const std::vector<Column> &columns() const { return _columns; }

  /// values[i] holds the full field of column i (components per vertex).
  void record(double time, const std::vector<const Eigen::VectorXd *> &values);

private:
  std::string         _name;
  mesh::VertexID      _vertex = 0;
  std::vector<Column> _columns;
  std::ofstream       _out;
};

} // namespace duet
