#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace duet::config {

/// Minimal element tree; text content is ignored.
struct XmlElement {
  std::string                                      name;
  std::vector<std::pair<std::string, std::string>> attributes; // document order
  std::vector<XmlElement>                          children;
  int                                              line = 0;

  const std::string *attribute(std::string_view key) const;
};

/// Parses a well-formed document; throws ConfigError "line N: ..." otherwise.
XmlElement parseXml(std::string_view text);

std::string escapeXml(std::string_view text);

} // namespace duet::config
