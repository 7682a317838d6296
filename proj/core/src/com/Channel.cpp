#include "duet/com/Channel.hpp"

#include <condition_variable>
#include <deque>
#include <mutex>

#include "duet/Error.hpp"

namespace duet::com {

namespace {

struct Queue {
  std::mutex              mutex;
  std::condition_variable ready;
  std::deque<Frame>       frames;
  bool                    closed = false;
};

class LocalChannel final : public Channel {
public:
  LocalChannel(std::shared_ptr<Queue> in, std::shared_ptr<Queue> out)
      : _in(std::move(in)), _out(std::move(out))
  {
  }

  ~LocalChannel() override { close(); }

  void send(const Frame &frame) override
  {
    std::lock_guard lock(_out->mutex);
    if (_out->closed) {
      throw CommError("connection lost");
    }
    _out->frames.push_back(frame);
    _out->ready.notify_all();
  }

  Frame receive() override
  {
    std::unique_lock lock(_in->mutex);
    _in->ready.wait(lock, [&] { return !_in->frames.empty() || _in->closed; });
    if (_in->frames.empty()) {
      throw CommError("connection lost");
    }
    Frame frame = std::move(_in->frames.front());
    _in->frames.pop_front();
    return frame;
  }

  void close() override
  {
    for (auto *q : {_in.get(), _out.get()}) {
      std::lock_guard lock(q->mutex);
      q->closed = true;
      q->ready.notify_all();
    }
  }

private:
  std::shared_ptr<Queue> _in;
  std::shared_ptr<Queue> _out;
};

} // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> makeLocalChannelPair()
{
  auto ab = std::make_shared<Queue>();
  auto ba = std::make_shared<Queue>();
  return {std::make_unique<LocalChannel>(ba, ab), std::make_unique<LocalChannel>(ab, ba)};
}

} // namespace duet::com
