#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "duet/Error.hpp"
#include "duet/config/Config.hpp"
#include "duet/config/Xml.hpp"

namespace duet::config {

using mapping::BasisKind;
using mapping::MappingKind;

std::string MappingDecl::tag() const
{
  if (kind == MappingKind::NearestNeighbor) {
    return "mapping:nearest-neighbor";
  }
  if (kind == MappingKind::NearestProjection) {
    return "mapping:nearest-projection";
  }
  switch (basis.value_or(BasisKind::ThinPlateSplines)) {
  case BasisKind::Gaussian:
    return "mapping:rbf-gaussian";
  case BasisKind::ThinPlateSplines:
    return "mapping:rbf-thin-plate-splines";
  case BasisKind::CompactThinPlateSplinesC2:
    return "mapping:rbf-compact-tps-c2";
  }
  return "mapping:unknown";
}

const UseMesh *ParticipantDecl::useMesh(std::string_view mesh) const
{
  for (const auto &use : meshes) {
    if (use.name == mesh) {
      return &use;
    }
  }
  return nullptr;
}

bool ParticipantDecl::provides(std::string_view mesh) const
{
  const auto *use = useMesh(mesh);
  return use != nullptr && use->provide;
}

const DataDecl *CouplingConfig::findData(std::string_view name) const
{
  for (const auto &d : data) {
    if (d.name == name) {
      return &d;
    }
  }
  return nullptr;
}

const MeshDecl *CouplingConfig::findMesh(std::string_view name) const
{
  for (const auto &m : meshes) {
    if (m.name == name) {
      return &m;
    }
  }
  return nullptr;
}

const ParticipantDecl *CouplingConfig::findParticipant(std::string_view name) const
{
  for (const auto &p : participants) {
    if (p.name == name) {
      return &p;
    }
  }
  return nullptr;
}

int CouplingConfig::components(std::string_view name) const
{
  const auto *d = findData(name);
  if (d == nullptr) {
    throw ConfigError(fmt::format("data \"{}\" is not declared", name));
  }
  return d->type == DataType::Vector ? dimensions : 1;
}

std::string toString(const Diagnostic &d)
{
  return fmt::format("{}: line {}: <{}>: {}", d.severity == Severity::Error ? "error" : "warning", d.line,
                     d.element, d.message);
}

namespace {

[[noreturn]] void fail(const XmlElement &element, const std::string &message)
{
  throw ConfigError(fmt::format("line {}: <{}>: {}", element.line, element.name, message));
}

class Reader {
public:
  explicit Reader(CouplingConfig &config)
      : _config(config)
  {
  }

  void allow(const XmlElement &element, std::initializer_list<std::string_view> keys)
  {
    for (const auto &[key, value] : element.attributes) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        _config.notes.warnings.push_back(
            {Severity::Warning, element.name, element.line, fmt::format("unknown attribute \"{}\" ignored", key)});
      }
    }
  }

  static const std::string &require(const XmlElement &element, std::string_view key)
  {
    const auto *value = element.attribute(key);
    if (value == nullptr) {
      fail(element, fmt::format("missing attribute \"{}\"", key));
    }
    if (value->empty()) {
      fail(element, fmt::format("attribute \"{}\" must not be empty", key));
    }
    return *value;
  }

  static double number(const XmlElement &element, std::string_view key, const std::string &text)
  {
    errno       = 0;
    char *end   = nullptr;
    const auto v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
      fail(element, fmt::format("attribute \"{}\" is not a number: \"{}\"", key, text));
    }
    return v;
  }

  static double number(const XmlElement &element, std::string_view key)
  {
    return number(element, key, require(element, key));
  }

  static int integer(const XmlElement &element, std::string_view key)
  {
    const auto &text = require(element, key);
    errno            = 0;
    char      *end   = nullptr;
    const long v     = std::strtol(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || errno == ERANGE || v < -1000000000 || v > 1000000000) {
      fail(element, fmt::format("attribute \"{}\" is not an integer: \"{}\"", key, text));
    }
    return static_cast<int>(v);
  }

  static bool boolean(const XmlElement &element, std::string_view key)
  {
    const auto *value = element.attribute(key);
    if (value == nullptr) {
      return false;
    }
    if (*value == "yes" || *value == "true" || *value == "1" || *value == "on") {
      return true;
    }
    if (*value == "no" || *value == "false" || *value == "0" || *value == "off") {
      return false;
    }
    fail(element, fmt::format("attribute \"{}\" must be yes or no, got \"{}\"", key, *value));
  }

  void root(const XmlElement &element)
  {
    if (element.name != "solver-interface") {
      fail(element, "missing solver-interface: unexpected root element");
    }
    allow(element, {"dimensions"});
    _config.at.line     = element.line;
    _config.dimensions  = integer(element, "dimensions");
    if (_config.dimensions != 2 && _config.dimensions != 3) {
      fail(element, fmt::format("dimensions must be 2 or 3, got {}", _config.dimensions));
    }
    bool haveM2N    = false;
    bool haveScheme = false;
    for (const auto &child : element.children) {
      if (child.name == "data:scalar" || child.name == "data:vector") {
        dataDecl(child);
      } else if (child.name == "mesh") {
        meshDecl(child);
      } else if (child.name == "participant") {
        participant(child);
      } else if (child.name == "m2n:sockets") {
        if (haveM2N) {
          fail(child, "duplicate m2n: exactly one is allowed");
        }
        haveM2N = true;
        m2n(child);
      } else if (child.name.rfind("coupling-scheme:", 0) == 0) {
        if (haveScheme) {
          fail(child, "duplicate coupling-scheme: exactly one is allowed");
        }
        haveScheme = true;
        scheme(child);
      } else {
        fail(child, "unknown element");
      }
    }
    if (!haveM2N) {
      fail(element, "missing m2n:sockets");
    }
    if (!haveScheme) {
      fail(element, "missing coupling-scheme");
    }
  }

private:
  void dataDecl(const XmlElement &element)
  {
    allow(element, {"name"});
    noChildren(element);
    DataDecl d;
    d.name    = require(element, "name");
    d.type    = element.name == "data:vector" ? DataType::Vector : DataType::Scalar;
    d.at.line = element.line;
    if (_config.findData(d.name)) {
      fail(element, fmt::format("duplicate data name \"{}\"", d.name));
    }
    _config.data.push_back(d);
  }

  void meshDecl(const XmlElement &element)
  {
    allow(element, {"name"});
    MeshDecl m;
    m.name    = require(element, "name");
    m.at.line = element.line;
    if (_config.findMesh(m.name)) {
      fail(element, fmt::format("duplicate mesh name \"{}\"", m.name));
    }
    for (const auto &child : element.children) {
      if (child.name != "use-data") {
        fail(child, "unknown element");
      }
      allow(child, {"name"});
      noChildren(child);
      const auto &name = require(child, "name");
      if (std::find(m.useData.begin(), m.useData.end(), name) != m.useData.end()) {
        fail(child, fmt::format("duplicate use-data \"{}\" on mesh \"{}\"", name, m.name));
      }
      m.useData.push_back(name);
    }
    _config.meshes.push_back(std::move(m));
  }

  void participant(const XmlElement &element)
  {
    allow(element, {"name"});
    ParticipantDecl p;
    p.name    = require(element, "name");
    p.at.line = element.line;
    if (_config.findParticipant(p.name)) {
      fail(element, fmt::format("duplicate participant name \"{}\"", p.name));
    }
    for (const auto &child : element.children) {
      if (child.name == "use-mesh") {
        allow(child, {"name", "provide", "from"});
        noChildren(child);
        UseMesh use;
        use.name    = require(child, "name");
        use.provide = boolean(child, "provide");
        if (const auto *from = child.attribute("from")) {
          use.from = *from;
        }
        use.at.line = child.line;
        if (p.useMesh(use.name)) {
          fail(child, fmt::format("participant \"{}\" uses mesh \"{}\" twice", p.name, use.name));
        }
        p.meshes.push_back(use);
      } else if (child.name == "write-data" || child.name == "read-data") {
        allow(child, {"name", "mesh"});
        noChildren(child);
        DataAccess access{require(child, "name"), require(child, "mesh"), {child.line}};
        auto      &list = child.name == "write-data" ? p.writeData : p.readData;
        for (const auto &other : list) {
          if (other.data == access.data && other.mesh == access.mesh) {
            fail(child, fmt::format("duplicate {} \"{}\" on mesh \"{}\"", child.name, access.data, access.mesh));
          }
        }
        list.push_back(access);
      } else if (child.name.rfind("mapping:", 0) == 0) {
        p.mappings.push_back(mappingDecl(child));
      } else if (child.name == "watch-point") {
        allow(child, {"name", "mesh", "coordinate"});
        noChildren(child);
        WatchPoint w;
        w.name    = require(child, "name");
        w.mesh    = require(child, "mesh");
        w.at.line = child.line;
        std::istringstream tokens(require(child, "coordinate"));
        std::string        token;
        while (std::getline(tokens, token, ';')) {
          std::istringstream inner(token);
          std::string        piece;
          while (inner >> piece) {
            w.coordinate.push_back(number(child, "coordinate", piece));
          }
        }
        for (const auto &other : p.watchPoints) {
          if (other.name == w.name) {
            fail(child, fmt::format("duplicate watch-point name \"{}\"", w.name));
          }
        }
        p.watchPoints.push_back(std::move(w));
      } else {
        fail(child, "unknown element");
      }
    }
    _config.participants.push_back(std::move(p));
  }

  MappingDecl mappingDecl(const XmlElement &element)
  {
    MappingDecl m;
    m.at.line        = element.line;
    const auto kind  = element.name.substr(8);
    bool       isRbf = true;
    if (kind == "nearest-neighbor") {
      m.kind = MappingKind::NearestNeighbor;
      isRbf  = false;
    } else if (kind == "nearest-projection") {
      m.kind = MappingKind::NearestProjection;
      isRbf  = false;
    } else if (kind == "rbf-gaussian") {
      m.basis = BasisKind::Gaussian;
    } else if (kind == "rbf-thin-plate-splines") {
      m.basis = BasisKind::ThinPlateSplines;
    } else if (kind == "rbf-compact-tps-c2") {
      m.basis = BasisKind::CompactThinPlateSplinesC2;
    } else {
      fail(element, "unknown element");
    }
    noChildren(element);
    if (isRbf) {
      m.kind = MappingKind::RadialBasisFunction;
      allow(element, {"from", "to", "constraint", "support-radius", "polynomial"});
    } else {
      allow(element, {"from", "to", "constraint"});
    }
    m.from = require(element, "from");
    if (const auto *to = element.attribute("to")) {
      m.to = *to;
    }
    const auto &constraint = require(element, "constraint");
    if (constraint == "consistent") {
      m.constraint = mapping::Constraint::Consistent;
    } else if (constraint == "conservative") {
      m.constraint = mapping::Constraint::Conservative;
    } else {
      fail(element, fmt::format("constraint must be consistent or conservative, got \"{}\"", constraint));
    }
    if (isRbf) {
      if (element.attribute("support-radius")) {
        m.supportRadius = number(element, "support-radius");
        if (!(m.supportRadius > 0.0)) {
          fail(element, "support-radius must be positive");
        }
      } else if (m.basis != BasisKind::ThinPlateSplines) {
        fail(element, "missing attribute \"support-radius\"");
      }
      if (const auto *poly = element.attribute("polynomial")) {
        if (*poly == "separate" || *poly == "separated") {
          m.polynomial = mapping::Polynomial::Separated;
        } else if (*poly == "on" || *poly == "integrated") {
          m.polynomial = mapping::Polynomial::Integrated;
        } else if (*poly == "off" || *poly == "none") {
          m.polynomial = mapping::Polynomial::None;
        } else {
          fail(element, fmt::format("polynomial must be separate, on or off, got \"{}\"", *poly));
        }
      }
    }
    return m;
  }

  void m2n(const XmlElement &element)
  {
    allow(element, {"from", "to", "exchange-directory"});
    noChildren(element);
    _config.m2n.from    = require(element, "from");
    _config.m2n.to      = require(element, "to");
    _config.m2n.at.line = element.line;
    if (const auto *dir = element.attribute("exchange-directory")) {
      _config.m2n.exchangeDirectory = dir->empty() ? "." : *dir;
    }
  }

  void scheme(const XmlElement &element)
  {
    auto      &s    = _config.scheme;
    auto      &at   = _config.schemeLines;
    const auto kind = cplscheme::schemeKindFromString(element.name.substr(16));
    if (!kind) {
      fail(element, "unknown element");
    }
    allow(element, {});
    s.kind         = *kind;
    at.scheme.line = element.line;
    std::set<std::string> seen;
    auto once = [&](const XmlElement &child) {
      if (!seen.insert(child.name).second) {
        fail(child, "element may appear only once");
      }
    };
    for (const auto &child : element.children) {
      if (child.name == "participants") {
        once(child);
        allow(child, {"first", "second"});
        noChildren(child);
        s.first               = require(child, "first");
        s.second              = require(child, "second");
        at.participants.line  = child.line;
      } else if (child.name == "time-window-size") {
        once(child);
        allow(child, {"value"});
        noChildren(child);
        s.windowSize       = number(child, "value");
        at.windowSize.line = child.line;
        if (!(s.windowSize > 0.0)) {
          fail(child, "time-window-size must be positive");
        }
      } else if (child.name == "max-time") {
        once(child);
        allow(child, {"value"});
        noChildren(child);
        s.maxTime       = number(child, "value");
        at.maxTime.line = child.line;
        if (!(s.maxTime > 0.0)) {
          fail(child, "max-time must be positive");
        }
      } else if (child.name == "max-iterations") {
        once(child);
        allow(child, {"value"});
        noChildren(child);
        s.maxIterations       = integer(child, "value");
        at.maxIterations.line = child.line;
      } else if (child.name == "exchange") {
        allow(child, {"data", "mesh", "from", "to"});
        noChildren(child);
        s.exchanges.push_back(
            {require(child, "data"), require(child, "mesh"), require(child, "from"), require(child, "to")});
        at.exchanges.push_back({child.line});
      } else if (child.name == "relative-convergence-measure") {
        allow(child, {"data", "mesh", "limit"});
        noChildren(child);
        s.measures.push_back({require(child, "data"), require(child, "mesh"), number(child, "limit")});
        at.measures.push_back({child.line});
        if (!(s.measures.back().limit > 0.0)) {
          fail(child, "limit must be positive");
        }
      } else if (child.name.rfind("acceleration:", 0) == 0) {
        once(child);
        acceleration(child);
      } else {
        fail(child, "unknown element");
      }
    }
    if (!seen.count("participants")) {
      fail(element, "missing <participants>");
    }
    if (!seen.count("time-window-size")) {
      fail(element, "missing <time-window-size>");
    }
    if (!seen.count("max-time")) {
      fail(element, "missing <max-time>");
    }
  }

  void acceleration(const XmlElement &element)
  {
    using acceleration::Method;
    auto      &a    = _config.scheme.acceleration;
    const auto name = element.name.substr(13);
    if (name == "constant") {
      a.method = Method::Constant;
    } else if (name == "aitken") {
      a.method = Method::Aitken;
    } else if (name == "IQN-ILS") {
      a.method = Method::IqnIls;
    } else if (name == "IQN-IMVJ") {
      a.method = Method::IqnImvj;
    } else {
      fail(element, "unknown element");
    }
    allow(element, {});
    _config.schemeLines.acceleration.line = element.line;
    std::set<std::string> seen;
    for (const auto &child : element.children) {
      if (!seen.insert(child.name).second) {
        fail(child, "element may appear only once");
      }
      noChildren(child);
      if (child.name == "initial-relaxation") {
        allow(child, {"value"});
        a.initialRelaxation = number(child, "value");
      } else if (child.name == "max-used-iterations") {
        allow(child, {"value"});
        a.maxColumns = integer(child, "value");
      } else if (child.name == "filter") {
        allow(child, {"type", "limit"});
        const auto &type = require(child, "type");
        if (type != "QR1") {
          fail(child, fmt::format("unsupported filter type \"{}\" (only QR1)", type));
        }
        if (child.attribute("limit")) {
          a.filterLimit = number(child, "limit");
        }
      } else {
        fail(child, "unknown element");
      }
    }
  }

  static void noChildren(const XmlElement &element)
  {
    if (!element.children.empty()) {
      fail(element.children.front(), "unknown element");
    }
  }

  CouplingConfig &_config;
};

[[noreturn]] void unresolved(int line, const std::string &element, const std::string &owner,
                             const std::string &what, const std::string &name)
{
  throw ConfigError(
      fmt::format("line {}: <{}>: {} references undeclared {} \"{}\"", line, element, owner, what, name));
}

void resolve(CouplingConfig &c)
{
  for (const auto &mesh : c.meshes) {
    for (const auto &data : mesh.useData) {
      if (!c.findData(data)) {
        unresolved(mesh.at.line, "mesh", fmt::format("mesh \"{}\"", mesh.name), "data", data);
      }
    }
  }
  for (auto &p : c.participants) {
    const auto owner = fmt::format("participant \"{}\"", p.name);
    for (const auto &use : p.meshes) {
      if (!c.findMesh(use.name)) {
        unresolved(use.at.line, "use-mesh", owner, "mesh", use.name);
      }
      if (!use.from.empty() && !c.findParticipant(use.from)) {
        unresolved(use.at.line, "use-mesh", owner, "participant", use.from);
      }
    }
    for (const auto *list : {&p.writeData, &p.readData}) {
      const char *tag = list == &p.writeData ? "write-data" : "read-data";
      for (const auto &access : *list) {
        if (!c.findData(access.data)) {
          unresolved(access.at.line, tag, owner, "data", access.data);
        }
        if (!c.findMesh(access.mesh)) {
          unresolved(access.at.line, tag, owner, "mesh", access.mesh);
        }
      }
    }
    for (auto &m : p.mappings) {
      if (!c.findMesh(m.from)) {
        unresolved(m.at.line, m.tag(), owner, "mesh", m.from);
      }
      if (m.to.empty()) {
        if (p.meshes.size() != 2 || !p.useMesh(m.from)) {
          throw ConfigError(fmt::format("line {}: <{}>: missing attribute \"to\" (participant \"{}\" does not use "
                                        "exactly two meshes including \"{}\")",
                                        m.at.line, m.tag(), p.name, m.from));
        }
        m.to         = p.meshes[0].name == m.from ? p.meshes[1].name : p.meshes[0].name;
        m.toInferred = true;
      } else if (!c.findMesh(m.to)) {
        unresolved(m.at.line, m.tag(), owner, "mesh", m.to);
      }
    }
    for (const auto &w : p.watchPoints) {
      if (!c.findMesh(w.mesh)) {
        unresolved(w.at.line, "watch-point", owner, "mesh", w.mesh);
      }
    }
  }
  for (const auto *name : {&c.m2n.from, &c.m2n.to}) {
    if (!c.findParticipant(*name)) {
      unresolved(c.m2n.at.line, "m2n:sockets", "m2n", "participant", *name);
    }
  }
  const auto &s         = c.scheme;
  const auto  schemeTag = fmt::format("coupling-scheme:{}", cplscheme::toString(s.kind));
  for (const auto *name : {&s.first, &s.second}) {
    if (!c.findParticipant(*name)) {
      unresolved(c.schemeLines.participants.line, "participants", schemeTag, "participant", *name);
    }
  }
  for (std::size_t i = 0; i < s.exchanges.size(); ++i) {
    const auto &e    = s.exchanges[i];
    const int   line = c.schemeLines.exchanges[i].line;
    const auto  who  = fmt::format("exchange of \"{}\"", e.data);
    if (!c.findData(e.data)) {
      unresolved(line, "exchange", schemeTag, "data", e.data);
    }
    if (!c.findMesh(e.mesh)) {
      unresolved(line, "exchange", who, "mesh", e.mesh);
    }
    for (const auto *name : {&e.from, &e.to}) {
      if (!c.findParticipant(*name)) {
        unresolved(line, "exchange", who, "participant", *name);
      }
    }
  }
  for (std::size_t i = 0; i < s.measures.size(); ++i) {
    const auto &m    = s.measures[i];
    const int   line = c.schemeLines.measures[i].line;
    if (!c.findData(m.data)) {
      unresolved(line, "relative-convergence-measure", schemeTag, "data", m.data);
    }
    if (!c.findMesh(m.mesh)) {
      unresolved(line, "relative-convergence-measure", schemeTag, "mesh", m.mesh);
    }
  }
}

} // namespace

CouplingConfig parse(std::string_view xml)
{
  const auto     root = parseXml(xml);
  CouplingConfig config;
  Reader(config).root(root);
  resolve(config);
  return config;
}

CouplingConfig parseFile(const std::string &path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(fmt::format("cannot open configuration file {}", path));
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

} // namespace duet::config
