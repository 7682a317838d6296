#include <fmt/format.h>
#include <sstream>

#include "duet/config/Config.hpp"
#include "duet/config/Xml.hpp"

namespace duet::config {

namespace {

std::string attr(std::string_view key, std::string_view value)
{
  return fmt::format(" {}=\"{}\"", key, escapeXml(value));
}

std::string number(double v)
{
  return fmt::format("{}", v); // shortest round-trip representation
}

const char *polynomialName(mapping::Polynomial p)
{
  switch (p) {
  case mapping::Polynomial::Integrated:
    return "on";
  case mapping::Polynomial::Separated:
    return "separate";
  case mapping::Polynomial::None:
    return "off";
  }
  return "separate";
}

} // namespace

std::string toXml(const CouplingConfig &c)
{
  std::ostringstream out;
  out << "<?xml version=\"1.0\"?>\n";
  out << "<solver-interface" << attr("dimensions", std::to_string(c.dimensions)) << ">\n";
  for (const auto &d : c.data) {
    out << "  <data:" << (d.type == DataType::Vector ? "vector" : "scalar") << attr("name", d.name) << "/>\n";
  }
  for (const auto &m : c.meshes) {
    out << "  <mesh" << attr("name", m.name) << ">\n";
    for (const auto &d : m.useData) {
      out << "    <use-data" << attr("name", d) << "/>\n";
    }
    out << "  </mesh>\n";
  }
  for (const auto &p : c.participants) {
    out << "  <participant" << attr("name", p.name) << ">\n";
    for (const auto &u : p.meshes) {
      out << "    <use-mesh" << attr("name", u.name);
      if (u.provide) {
        out << attr("provide", "yes");
      }
      if (!u.from.empty()) {
        out << attr("from", u.from);
      }
      out << "/>\n";
    }
    for (const auto &w : p.writeData) {
      out << "    <write-data" << attr("name", w.data) << attr("mesh", w.mesh) << "/>\n";
    }
    for (const auto &r : p.readData) {
      out << "    <read-data" << attr("name", r.data) << attr("mesh", r.mesh) << "/>\n";
    }
    for (const auto &m : p.mappings) {
      out << "    <" << m.tag() << attr("from", m.from);
      if (!m.toInferred) {
        out << attr("to", m.to);
      }
      out << attr("constraint", mapping::toString(m.constraint));
      if (m.kind == mapping::MappingKind::RadialBasisFunction) {
        if (m.supportRadius > 0.0) {
          out << attr("support-radius", number(m.supportRadius));
        }
        out << attr("polynomial", polynomialName(m.polynomial));
      }
      out << "/>\n";
    }
    for (const auto &w : p.watchPoints) {
      std::string coordinate;
      for (std::size_t i = 0; i < w.coordinate.size(); ++i) {
        coordinate += (i ? ";" : "") + number(w.coordinate[i]);
      }
      out << "    <watch-point" << attr("name", w.name) << attr("mesh", w.mesh) << attr("coordinate", coordinate)
          << "/>\n";
    }
    out << "  </participant>\n";
  }
  out << "  <m2n:sockets" << attr("from", c.m2n.from) << attr("to", c.m2n.to)
      << attr("exchange-directory", c.m2n.exchangeDirectory) << "/>\n";

  const auto &s    = c.scheme;
  const auto  kind = cplscheme::toString(s.kind);
  out << "  <coupling-scheme:" << kind << ">\n";
  out << "    <participants" << attr("first", s.first) << attr("second", s.second) << "/>\n";
  out << "    <time-window-size" << attr("value", number(s.windowSize)) << "/>\n";
  out << "    <max-time" << attr("value", number(s.maxTime)) << "/>\n";
  out << "    <max-iterations" << attr("value", std::to_string(s.maxIterations)) << "/>\n";
  for (const auto &e : s.exchanges) {
    out << "    <exchange" << attr("data", e.data) << attr("mesh", e.mesh) << attr("from", e.from)
        << attr("to", e.to) << "/>\n";
  }
  for (const auto &m : s.measures) {
    out << "    <relative-convergence-measure" << attr("data", m.data) << attr("mesh", m.mesh)
        << attr("limit", number(m.limit)) << "/>\n";
  }
  const auto &a = s.acceleration;
  if (a.method != acceleration::Method::None) {
    const auto method = acceleration::toString(a.method);
    out << "    <acceleration:" << method << ">\n";
    out << "      <initial-relaxation" << attr("value", number(a.initialRelaxation)) << "/>\n";
    out << "      <max-used-iterations" << attr("value", std::to_string(a.maxColumns)) << "/>\n";
    out << "      <filter" << attr("type", "QR1") << attr("limit", number(a.filterLimit)) << "/>\n";
    out << "    </acceleration:" << method << ">\n";
  }
  out << "  </coupling-scheme:" << kind << ">\n";
  out << "</solver-interface>\n";
  return out.str();
}

} // namespace duet::config
