#include "duet/mesh/MeshIO.hpp"

#include <fmt/format.h>
#include <fstream>
#include <sstream>
#include <vector>

#include "duet/Error.hpp"

namespace duet::mesh {

namespace {

struct PendingElement {
  char                  kind;
  std::vector<VertexID> ids;
  int                   line;
};

} // namespace

Mesh readMesh(std::istream &in, const std::string &name)
{
  std::vector<std::vector<double>> vertices;
  std::vector<PendingElement>      elements;
  int                              dims = 0;

  std::string line;
  int         lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream tokens(line);
    std::string        tag;
    if (!(tokens >> tag)) {
      continue;
    }
    if (tag == "v") {
      std::vector<double> coords;
      double              value;
      while (tokens >> value) {
        coords.push_back(value);
      }
      if (!tokens.eof()) {
        throw Error(fmt::format("mesh line {}: malformed coordinate", lineNo));
      }
      if (coords.size() < 2 || coords.size() > 3) {
        throw Error(fmt::format("mesh line {}: vertex needs 2 or 3 coordinates", lineNo));
      }
      if (dims == 0) {
        dims = static_cast<int>(coords.size());
      } else if (dims != static_cast<int>(coords.size())) {
        throw Error(fmt::format("mesh line {}: vertex has {} coordinates, earlier vertices have {}",
                                lineNo, coords.size(), dims));
      }
      vertices.push_back(std::move(coords));
    } else if (tag == "e" || tag == "t") {
      const std::size_t     expected = tag == "e" ? 2 : 3;
      std::vector<VertexID> ids;
      VertexID              id;
      while (tokens >> id) {
        ids.push_back(id);
      }
      if (!tokens.eof() || ids.size() != expected) {
        throw Error(fmt::format("mesh line {}: '{}' needs {} vertex indices", lineNo, tag, expected));
      }
      elements.push_back({tag[0], std::move(ids), lineNo});
    } else {
      throw Error(fmt::format("mesh line {}: unknown record '{}'", lineNo, tag));
    }
  }

  Mesh mesh(name, dims == 0 ? 3 : dims);
  for (const auto &v : vertices) {
    mesh.addVertex(v);
  }
  for (const auto &element : elements) {
    try {
      if (element.kind == 'e') {
        mesh.addEdge(element.ids[0], element.ids[1]);
      } else {
        mesh.addTriangle(element.ids[0], element.ids[1], element.ids[2]);
      }
    } catch (const Error &e) {
      throw Error(fmt::format("mesh line {}: {}", element.line, e.what()));
    }
  }
  return mesh;
}

Mesh readMeshFile(const std::filesystem::path &path, const std::string &name)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(fmt::format("cannot open mesh file {}", path.string()));
  }
  return readMesh(in, name.empty() ? path.stem().string() : name);
}

void writeMesh(std::ostream &out, const Mesh &mesh)
{
  for (const auto &v : mesh.vertices()) {
    out << 'v';
    for (int d = 0; d < mesh.dimensions(); ++d) {
      out << fmt::format(" {:.17g}", v[d]);
    }
    out << '\n';
  }
  for (const auto &e : mesh.edges()) {
    out << fmt::format("e {} {}\n", e.vertices[0], e.vertices[1]);
  }
  for (const auto &t : mesh.triangles()) {
    out << fmt::format("t {} {} {}\n", t.vertices[0], t.vertices[1], t.vertices[2]);
  }
}

void writeMeshFile(const std::filesystem::path &path, const Mesh &mesh)
{
  std::ofstream out(path);
  if (!out) {
    throw Error(fmt::format("cannot write mesh file {}", path.string()));
  }
  writeMesh(out, mesh);
}

} // namespace duet::mesh
