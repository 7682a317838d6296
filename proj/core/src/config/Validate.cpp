#include <algorithm>
#include <cctype>
#include <fmt/format.h>

#include "duet/Error.hpp"
#include "duet/config/Config.hpp"

namespace duet::config {

namespace {

class Checker {
public:
  explicit Checker(const CouplingConfig &config)
      : c(config)
  {
  }

  std::vector<Diagnostic> run()
  {
    out = c.notes.warnings;
    participantsAndM2N();
    timing();
    accelerationSettings();
    exchanges();
    for (const auto &p : c.participants) {
      participant(p);
    }
    return out;
  }

private:
  void error(const std::string &element, int line, std::string message)
  {
    out.push_back({Severity::Error, element, line, std::move(message)});
  }

  void warning(const std::string &element, int line, std::string message)
  {
    out.push_back({Severity::Warning, element, line, std::move(message)});
  }

  std::string schemeTag() const { return fmt::format("coupling-scheme:{}", cplscheme::toString(c.scheme.kind)); }

  static bool contains(std::string haystack, std::string_view needle)
  {
    std::transform(haystack.begin(), haystack.end(), haystack.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return haystack.find(needle) != std::string::npos;
  }

  bool meshHasData(const std::string &mesh, const std::string &data) const
  {
    const auto *m = c.findMesh(mesh);
    return m && std::find(m->useData.begin(), m->useData.end(), data) != m->useData.end();
  }

  void participantsAndM2N()
  {
    if (c.participants.size() != 2) {
      error("solver-interface", c.at.line,
            fmt::format("exactly two participants are required, found {}", c.participants.size()));
    }
    const auto &s = c.scheme;
    if (s.first == s.second) {
      error("participants", c.schemeLines.participants.line,
            fmt::format("first and second participant are both \"{}\"", s.first));
    }
    const auto &m = c.m2n;
    if (m.from == m.to) {
      error("m2n:sockets", m.at.line, fmt::format("m2n connects \"{}\" to itself", m.from));
    } else if (!((m.from == s.first && m.to == s.second) || (m.from == s.second && m.to == s.first))) {
      error("m2n:sockets", m.at.line,
            fmt::format("m2n between \"{}\" and \"{}\" does not connect the scheme participants \"{}\" and \"{}\"",
                        m.from, m.to, s.first, s.second));
    }
  }

  void timing()
  {
    const auto &s = c.scheme;
    try {
      cplscheme::windowCount(s);
    } catch (const ConfigError &e) {
      error("max-time", c.schemeLines.maxTime.line, e.what());
    }
    if (cplscheme::isImplicit(s.kind)) {
      if (s.measures.empty()) {
        error(schemeTag(), c.schemeLines.scheme.line, "implicit scheme requires at least one convergence measure");
      }
      if (s.maxIterations < 1) {
        error("max-iterations", c.schemeLines.maxIterations.line,
              fmt::format("max-iterations must be at least 1, got {}", s.maxIterations));
      }
    } else {
      if (!s.measures.empty()) {
        warning("relative-convergence-measure", c.schemeLines.measures.front().line,
                "convergence measures are ignored by explicit schemes");
      }
      if (s.acceleration.method != acceleration::Method::None) {
        warning("acceleration", c.schemeLines.acceleration.line, "acceleration is ignored by explicit schemes");
      }
    }
  }

  void accelerationSettings()
  {
    const auto &a    = c.scheme.acceleration;
    const int   line = c.schemeLines.acceleration.line;
    if (a.method == acceleration::Method::None) {
      return;
    }
    const auto tag = fmt::format("acceleration:{}", acceleration::toString(a.method));
    if (!(a.initialRelaxation > 0.0 && a.initialRelaxation <= 1.0)) {
      error(tag, line, fmt::format("initial-relaxation must lie in (0, 1], got {}", a.initialRelaxation));
    }
    if (a.maxColumns < 1) {
      error(tag, line, fmt::format("max-used-iterations must be at least 1, got {}", a.maxColumns));
    }
    if (!(a.filterLimit > 0.0 && a.filterLimit < 1.0)) {
      error(tag, line, fmt::format("filter limit must lie in (0, 1), got {}", a.filterLimit));
    }
  }

  void exchanges()
  {
    const auto &s = c.scheme;
    for (std::size_t i = 0; i < s.exchanges.size(); ++i) {
      const auto &e    = s.exchanges[i];
      const int   line = c.schemeLines.exchanges[i].line;
      for (std::size_t j = 0; j < i; ++j) {
        if (s.exchanges[j].key() == e.key()) {
          error("exchange", line, fmt::format("data \"{}\" on mesh \"{}\" is exchanged twice", e.data, e.mesh));
        }
      }
      const bool endpoints = (e.from == s.first && e.to == s.second) || (e.from == s.second && e.to == s.first);
      if (!endpoints) {
        error("exchange", line,
              fmt::format("exchange from \"{}\" to \"{}\" does not connect the scheme participants", e.from, e.to));
        continue;
      }
      if (!meshHasData(e.mesh, e.data)) {
        error("exchange", line, fmt::format("mesh \"{}\" does not use data \"{}\"", e.mesh, e.data));
      }
      const auto *from = c.findParticipant(e.from);
      const auto *to   = c.findParticipant(e.to);
      if (!from->useMesh(e.mesh) || !to->useMesh(e.mesh)) {
        error("exchange", line,
              fmt::format("mesh \"{}\" of the exchange must be used by both \"{}\" and \"{}\"", e.mesh, e.from, e.to));
      }
    }
    for (std::size_t i = 0; i < s.measures.size(); ++i) {
      const auto &m     = s.measures[i];
      const bool  found = std::any_of(s.exchanges.begin(), s.exchanges.end(),
                                      [&](const cplscheme::Exchange &e) { return e.key() == m.key(); });
      if (!found) {
        error("relative-convergence-measure", c.schemeLines.measures[i].line,
              fmt::format("convergence measure on \"{}\" at mesh \"{}\" refers to data that is not exchanged", m.data,
                          m.mesh));
      }
    }
  }

  bool receivesOn(const ParticipantDecl &p, const std::string &data, const std::string &mesh) const
  {
    return std::any_of(c.scheme.exchanges.begin(), c.scheme.exchanges.end(), [&](const cplscheme::Exchange &e) {
      return e.to == p.name && e.data == data && e.mesh == mesh;
    });
  }

  bool writesOn(const ParticipantDecl &p, const std::string &data, const std::string &mesh) const
  {
    return std::any_of(p.writeData.begin(), p.writeData.end(),
                       [&](const DataAccess &a) { return a.data == data && a.mesh == mesh; });
  }

  void participant(const ParticipantDecl &p)
  {
    for (const auto &use : p.meshes) {
      if (use.provide && !use.from.empty()) {
        error("use-mesh", use.at.line,
              fmt::format("participant \"{}\" both provides mesh \"{}\" and receives it from \"{}\"", p.name,
                          use.name, use.from));
      } else if (!use.provide && use.from.empty()) {
        error("use-mesh", use.at.line,
              fmt::format("participant \"{}\" neither provides nor receives mesh \"{}\"", p.name, use.name));
      } else if (!use.from.empty()) {
        const auto *provider = c.findParticipant(use.from);
        if (use.from == p.name) {
          error("use-mesh", use.at.line, fmt::format("participant \"{}\" receives mesh \"{}\" from itself", p.name, use.name));
        } else if (!provider->provides(use.name)) {
          error("use-mesh", use.at.line,
                fmt::format("participant \"{}\" receives mesh \"{}\" from \"{}\", which does not provide it", p.name,
                            use.name, use.from));
        }
      }
    }
    for (const auto *list : {&p.writeData, &p.readData}) {
      const std::string tag = list == &p.writeData ? "write-data" : "read-data";
      for (const auto &a : *list) {
        if (!p.useMesh(a.mesh)) {
          error(tag, a.at.line, fmt::format("participant \"{}\" does not use mesh \"{}\"", p.name, a.mesh));
        } else if (!meshHasData(a.mesh, a.data)) {
          error(tag, a.at.line, fmt::format("mesh \"{}\" does not use data \"{}\"", a.mesh, a.data));
        }
      }
    }
    for (const auto &m : p.mappings) {
      mappingDecl(p, m);
    }
    for (const auto &r : p.readData) {
      bool produced = receivesOn(p, r.data, r.mesh);
      for (const auto &m : p.mappings) {
        produced = produced || (m.to == r.mesh && receivesOn(p, r.data, m.from));
      }
      if (!produced) {
        error("read-data", r.at.line,
              fmt::format("read-data \"{}\" on mesh \"{}\" of participant \"{}\" is neither received nor mapped from "
                          "received data",
                          r.data, r.mesh, p.name));
      }
    }
    for (std::size_t i = 0; i < c.scheme.exchanges.size(); ++i) {
      const auto &e = c.scheme.exchanges[i];
      if (e.from != p.name) {
        continue;
      }
      bool written = writesOn(p, e.data, e.mesh);
      for (const auto &m : p.mappings) {
        written = written || (m.to == e.mesh && writesOn(p, e.data, m.from));
      }
      if (!written) {
        error("exchange", c.schemeLines.exchanges[i].line,
              fmt::format("participant \"{}\" sends \"{}\" on mesh \"{}\" but never writes it there or maps it there",
                          p.name, e.data, e.mesh));
      }
    }
    for (const auto &w : p.watchPoints) {
      if (!p.useMesh(w.mesh)) {
        error("watch-point", w.at.line,
              fmt::format("watch-point \"{}\" is on mesh \"{}\", which participant \"{}\" does not use", w.name,
                          w.mesh, p.name));
      }
      if (static_cast<int>(w.coordinate.size()) != c.dimensions) {
        error("watch-point", w.at.line,
              fmt::format("watch-point \"{}\" has {} coordinates, expected {}", w.name, w.coordinate.size(),
                          c.dimensions));
      }
    }
  }

  void mappingDecl(const ParticipantDecl &p, const MappingDecl &m)
  {
    const auto tag = m.tag();
    if (!p.useMesh(m.from) || !p.useMesh(m.to)) {
      error(tag, m.at.line,
            fmt::format("mapping from \"{}\" to \"{}\" uses a mesh participant \"{}\" does not use", m.from, m.to,
                        p.name));
      return;
    }
    if (m.from == m.to) {
      error(tag, m.at.line, fmt::format("mapping from mesh \"{}\" to itself", m.from));
      return;
    }
    const bool write = p.provides(m.from) && !p.provides(m.to);
    const bool read  = p.provides(m.to) && !p.provides(m.from);
    if (!write && !read) {
      error(tag, m.at.line,
            fmt::format("mapping from \"{}\" to \"{}\" must connect a provided mesh with a received one", m.from,
                        m.to));
      return;
    }
    const auto &accesses = write ? p.writeData : p.readData;
    const auto &own      = write ? m.from : m.to;
    for (const auto &a : accesses) {
      if (a.mesh != own) {
        continue;
      }
      const bool forceLike = contains(a.data, "force") || contains(a.data, "flux");
      if (m.constraint == mapping::Constraint::Consistent && write && contains(a.data, "force")) {
        warning(tag, m.at.line,
                fmt::format("consistent mapping of force-like data \"{}\"; conservative is usual", a.data));
      }
      if (m.constraint == mapping::Constraint::Conservative && !forceLike) {
        warning(tag, m.at.line,
                fmt::format("conservative mapping of data \"{}\", which does not look like a cumulative quantity",
                            a.data));
      }
    }
  }

  const CouplingConfig   &c;
  std::vector<Diagnostic> out;
};

} // namespace

std::vector<Diagnostic> validate(const CouplingConfig &config)
{
  return Checker(config).run();
}

bool hasErrors(const std::vector<Diagnostic> &diagnostics)
{
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic &d) { return d.severity == Severity::Error; });
}

} // namespace duet::config
