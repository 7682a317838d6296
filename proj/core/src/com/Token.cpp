#include "duet/com/Token.hpp"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <openssl/evp.h>
#include <unistd.h>

#include "duet/Error.hpp"

namespace duet::com {

std::string sha256Hex(std::string_view text)
{
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int  length = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex += fmt::format("{:02x}", digest[i]);
  }
  return hex;
}

std::filesystem::path tokenPath(const std::filesystem::path &exchangeDir, const std::string &from,
                                const std::string &to, int rankA, int rankB)
{
  if (from.empty() || to.empty()) {
    throw Error("token path needs non-empty participant names");
  }
  const auto stem = fmt::format("{}-{}-{}-{}", from, to, rankA, rankB);
  return exchangeDir / "precice-run" / sha256Hex(stem).substr(0, 2) / (stem + ".address");
}

void writeToken(const std::filesystem::path &path, const std::string &host, int port)
{
  std::filesystem::create_directories(path.parent_path());
  auto temporary = path;
  temporary += fmt::format(".{}.tmp", ::getpid());
  {
    std::ofstream out(temporary, std::ios::trunc);
    if (!out) {
      throw CommError(fmt::format("cannot write connection token {}", temporary.string()));
    }
    out << host << ':' << port << '\n';
    if (!out.flush()) {
      throw CommError(fmt::format("cannot write connection token {}", temporary.string()));
    }
  }
  std::filesystem::rename(temporary, path);
}

std::optional<Address> readToken(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in) {
    return std::nullopt;
  }
  std::string line;
  if (!std::getline(in, line) || in.eof()) {
    return std::nullopt; // no trailing newline yet
  }
  const auto colon = line.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    return std::nullopt;
  }
  Address     address{line.substr(0, colon), 0};
  const char *first = line.data() + colon + 1;
  const char *last  = line.data() + line.size();
  auto [end, ec]    = std::from_chars(first, last, address.port);
  if (ec != std::errc{} || end != last || address.port <= 0 || address.port > 65535) {
    return std::nullopt;
  }
  return address;
}

} // namespace duet::com
