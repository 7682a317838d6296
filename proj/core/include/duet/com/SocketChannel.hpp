#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "duet/com/Channel.hpp"

namespace duet::com {

struct ConnectionSettings {
  std::string           local;
  std::string           remote;
  bool                  acceptor = false; ///< the m2n "to" side accepts, "from" requests
  std::filesystem::path exchangeDirectory = ".";
  std::chrono::milliseconds timeout{30000};
  std::chrono::milliseconds pollInterval{10};
};

/// TCP channel established through a token file in the exchange directory.
///
/// The acceptor listens on an ephemeral loopback port, publishes
/// "host:port" at tokenPath(dir, from, to, 0, 0) and removes the file after
/// accepting. The requester polls for the file and connects, retrying until
/// the timeout so that a stale token from an earlier run is harmless.
class SocketChannel final : public Channel {
public:
  static std::unique_ptr<SocketChannel> connect(const ConnectionSettings &settings);

  ~SocketChannel() override;
  SocketChannel(const SocketChannel &)            = delete;
  SocketChannel &operator=(const SocketChannel &) = delete;

  void  send(const Frame &frame) override;
  Frame receive() override;
  void  close() override;

private:
  explicit SocketChannel(int fd);

  bool readAvailable(bool block);

  int                       _fd = -1;
  std::vector<std::uint8_t> _inbox;
};

} // namespace duet::com
