#include <fmt/format.h>
#include <sstream>

#include "duet/config/Config.hpp"

namespace duet::config {

namespace {

std::string quoted(std::string_view text)
{
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  return out + "\"";
}

std::string participantNode(const std::string &name)
{
  return quoted("participant:" + name);
}

std::string meshNode(const std::string &name)
{
  return quoted("mesh:" + name);
}

} // namespace

std::string toDot(const CouplingConfig &c)
{
  std::ostringstream out;
  out << "digraph coupling {\n";
  out << "  rankdir=LR;\n";
  for (const auto &p : c.participants) {
    out << "  " << participantNode(p.name) << " [label=" << quoted(p.name) << ", shape=box, style=bold];\n";
  }
  for (const auto &m : c.meshes) {
    out << "  " << meshNode(m.name) << " [label=" << quoted(m.name) << ", shape=ellipse];\n";
  }
  for (const auto &p : c.participants) {
    for (const auto &u : p.meshes) {
      if (u.provide) {
        out << "  " << participantNode(p.name) << " -> " << meshNode(u.name) << " [label=\"provide\"];\n";
      }
      if (!u.from.empty()) {
        out << "  " << meshNode(u.name) << " -> " << participantNode(p.name)
            << " [label=" << quoted("from " + u.from) << ", style=dashed];\n";
      }
    }
  }
  for (const auto &p : c.participants) {
    for (const auto &m : p.mappings) {
      const auto label = fmt::format("{} {} ({})", m.tag().substr(8), mapping::toString(m.constraint), p.name);
      out << "  " << meshNode(m.from) << " -> " << meshNode(m.to) << " [label=" << quoted(label)
          << ", color=blue];\n";
    }
  }
  for (const auto &e : c.scheme.exchanges) {
    out << "  " << participantNode(e.from) << " -> " << participantNode(e.to)
        << " [label=" << quoted(e.data + " on " + e.mesh) << ", color=red];\n";
  }
  out << "  " << participantNode(c.m2n.from) << " -> " << participantNode(c.m2n.to)
      << " [label=\"m2n:sockets\", style=dotted, arrowhead=none];\n";
  out << "}\n";
  return out.str();
}

} // namespace duet::config
