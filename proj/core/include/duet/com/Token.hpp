#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace duet::com {

/// Lowercase hex SHA-256 digest.
std::string sha256Hex(std::string_view text);

/// exchangeDir/precice-run/hh/{from}-{to}-{rankA}-{rankB}.address, hh being
/// the first two hex digits of the SHA-256 of the file stem.
std::filesystem::path tokenPath(const std::filesystem::path &exchangeDir, const std::string &from,
                                const std::string &to, int rankA = 0, int rankB = 0);

/// Writes "host:port\n" via a temporary file and rename.
void writeToken(const std::filesystem::path &path, const std::string &host, int port);

struct Address {
  std::string host;
  int         port = 0;
};

/// Parses a token file; nullopt if it is missing or incomplete.
std::optional<Address> readToken(const std::filesystem::path &path);

} // namespace duet::com
