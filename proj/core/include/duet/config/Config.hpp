#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duet/cplscheme/SchemeConfig.hpp"
#include "duet/mapping/MappingOperator.hpp"

namespace duet::config {

/// Source line of an element; never affects equality.
struct SourceLine {
  int line = 0;

  friend bool operator==(const SourceLine &, const SourceLine &) { return true; }
};

enum class DataType { Scalar, Vector };

struct DataDecl {
  std::string name;
  DataType    type = DataType::Scalar;
  SourceLine  at;

  friend bool operator==(const DataDecl &, const DataDecl &) = default;
};

struct MeshDecl {
  std::string              name;
  std::vector<std::string> useData;
  SourceLine               at;

  friend bool operator==(const MeshDecl &, const MeshDecl &) = default;
};

struct UseMesh {
  std::string name;
  bool        provide = false;
  std::string from; ///< empty unless received from the peer
  SourceLine  at;

  friend bool operator==(const UseMesh &, const UseMesh &) = default;
};

struct DataAccess {
  std::string data;
  std::string mesh;
  SourceLine  at;

  friend bool operator==(const DataAccess &, const DataAccess &) = default;
};

struct MappingDecl {
  mapping::MappingKind             kind = mapping::MappingKind::NearestNeighbor;
  std::optional<mapping::BasisKind> basis; ///< set for rbf mappings
  std::string                      from;
  std::string                      to;
  bool                             toInferred = false;
  mapping::Constraint              constraint = mapping::Constraint::Consistent;
  double                           supportRadius = 0.0; ///< 0 when not given
  mapping::Polynomial              polynomial    = mapping::Polynomial::Separated;
  SourceLine                       at;

  std::string tag() const; ///< "mapping:rbf-compact-tps-c2" etc.
  friend bool operator==(const MappingDecl &, const MappingDecl &) = default;
};

struct WatchPoint {
  std::string         name;
  std::string         mesh;
  std::vector<double> coordinate;
  SourceLine          at;

  friend bool operator==(const WatchPoint &, const WatchPoint &) = default;
};

struct ParticipantDecl {
  std::string              name;
  std::vector<UseMesh>     meshes;
  std::vector<DataAccess>  writeData;
  std::vector<DataAccess>  readData;
  std::vector<MappingDecl> mappings;
  std::vector<WatchPoint>  watchPoints;
  SourceLine               at;

  const UseMesh *useMesh(std::string_view mesh) const;
  bool           provides(std::string_view mesh) const;
  friend bool operator==(const ParticipantDecl &, const ParticipantDecl &) = default;
};

struct M2NDecl {
  std::string from;
  std::string to;
  std::string exchangeDirectory = ".";
  SourceLine  at;

  friend bool operator==(const M2NDecl &, const M2NDecl &) = default;
};

/// Source lines of the scheme element and its list children.
struct SchemeLines {
  SourceLine              scheme;
  SourceLine              participants;
  SourceLine              windowSize;
  SourceLine              maxTime;
  SourceLine              maxIterations;
  SourceLine              acceleration;
  std::vector<SourceLine> exchanges;
  std::vector<SourceLine> measures;

  friend bool operator==(const SchemeLines &, const SchemeLines &) = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity    severity = Severity::Error;
  std::string element;
  int         line = 0;
  std::string message;

  friend bool operator==(const Diagnostic &, const Diagnostic &) = default;
};

std::string toString(const Diagnostic &d);

/// Diagnostics gathered while parsing (unknown attributes); never affect equality.
struct ParseNotes {
  std::vector<Diagnostic> warnings;

  friend bool operator==(const ParseNotes &, const ParseNotes &) { return true; }
};

struct CouplingConfig {
  int                          dimensions = 3;
  std::vector<DataDecl>        data;
  std::vector<MeshDecl>        meshes;
  std::vector<ParticipantDecl> participants;
  M2NDecl                      m2n;
  cplscheme::SchemeConfig      scheme;
  SchemeLines                  schemeLines;
  SourceLine                   at;
  ParseNotes                   notes;

  const DataDecl        *findData(std::string_view name) const;
  const MeshDecl        *findMesh(std::string_view name) const;
  const ParticipantDecl *findParticipant(std::string_view name) const;
  int                    components(std::string_view data) const;

  friend bool operator==(const CouplingConfig &, const CouplingConfig &) = default;
};

/// Parses the XML vocabulary. Syntax errors, unknown elements, missing or
/// malformed attributes, duplicate names and unresolved references throw
/// ConfigError citing the line. Unknown attributes become warnings in notes.
CouplingConfig parse(std::string_view xml);
CouplingConfig parseFile(const std::string &path);

/// Semantic checks in deterministic order. Includes the parse warnings.
std::vector<Diagnostic> validate(const CouplingConfig &config);
bool                    hasErrors(const std::vector<Diagnostic> &diagnostics);

/// Canonical XML; parse(toXml(c)) == c.
std::string toXml(const CouplingConfig &config);

/// Graphviz digraph of participants, meshes, exchanges and mappings.
std::string toDot(const CouplingConfig &config);

} // namespace duet::config
