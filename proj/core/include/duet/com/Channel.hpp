#pragma once

#include <memory>
#include <string>
#include <utility>

#include "duet/com/Frame.hpp"

namespace duet::com {

/// Ordered, reliable frame transport between two participants.
class Channel {
public:
  virtual ~Channel() = default;

  virtual void  send(const Frame &frame) = 0;
  /// Blocks until a complete frame is available; throws "connection lost" if
  /// the peer went away.
  virtual Frame receive() = 0;
  virtual void  close() = 0;

  void          sendControl(const WindowControl &c) { send(makeControlFrame(c)); }
  WindowControl receiveControl() { return readControlFrame(receive()); }
};

/// Two connected in-process endpoints, for running both participants on
/// threads of one process.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> makeLocalChannelPair();

} // namespace duet::com
