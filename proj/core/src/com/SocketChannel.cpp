#include "duet/com/SocketChannel.hpp"

#include <arpa/inet.h>
#include <cerrno>
#include <cstring>
#include <fmt/format.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <thread>
#include <unistd.h>

#include "duet/Error.hpp"
#include "duet/com/Token.hpp"

namespace duet::com {

namespace {

using Clock = std::chrono::steady_clock;

std::string lastError()
{
  return std::strerror(errno);
}

void setNoDelay(int fd)
{
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

int listenLoopback(int &port)
{
  const int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) {
    throw CommError(fmt::format("socket: {}", lastError()));
  }
  sockaddr_in address{};
  address.sin_family      = AF_INET;
  address.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  address.sin_port        = 0;
  if (::bind(fd, reinterpret_cast<sockaddr *>(&address), sizeof(address)) != 0 || ::listen(fd, 1) != 0) {
    const auto message = lastError();
    ::close(fd);
    throw CommError(fmt::format("cannot listen on loopback: {}", message));
  }
  socklen_t length = sizeof(address);
  ::getsockname(fd, reinterpret_cast<sockaddr *>(&address), &length);
  port = ntohs(address.sin_port);
  return fd;
}

int tryConnect(const Address &target)
{
  addrinfo hints{};
  hints.ai_family   = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo  *result = nullptr;
  const auto port   = std::to_string(target.port);
  if (::getaddrinfo(target.host.c_str(), port.c_str(), &hints, &result) != 0 || result == nullptr) {
    return -1;
  }
  int fd = ::socket(result->ai_family, result->ai_socktype | SOCK_CLOEXEC, result->ai_protocol);
  if (fd >= 0 && ::connect(fd, result->ai_addr, result->ai_addrlen) != 0) {
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(result);
  return fd;
}

} // namespace

std::unique_ptr<SocketChannel> SocketChannel::connect(const ConnectionSettings &settings)
{
  const auto &from     = settings.acceptor ? settings.remote : settings.local;
  const auto &to       = settings.acceptor ? settings.local : settings.remote;
  const auto  token    = tokenPath(settings.exchangeDirectory, from, to, 0, 0);
  const auto  deadline = Clock::now() + settings.timeout;

  if (settings.acceptor) {
    int        port     = 0;
    const int  listener = listenLoopback(port);
    try {
      writeToken(token, "127.0.0.1", port);
    } catch (...) {
      ::close(listener);
      throw;
    }
    pollfd     pfd{listener, POLLIN, 0};
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    const int ready = ::poll(&pfd, 1, static_cast<int>(std::max<long>(remaining, 0)));
    int       fd    = ready > 0 ? ::accept4(listener, nullptr, nullptr, SOCK_CLOEXEC) : -1;
    ::close(listener);
    std::error_code ignored;
    std::filesystem::remove(token, ignored);
    if (fd < 0) {
      throw CommError(fmt::format("handshake timeout: {} waited for {} (token {})", settings.local,
                                  settings.remote, token.string()));
    }
    setNoDelay(fd);
    return std::unique_ptr<SocketChannel>(new SocketChannel(fd));
  }

  while (true) {
    if (auto address = readToken(token)) {
      if (const int fd = tryConnect(*address); fd >= 0) {
        setNoDelay(fd);
        return std::unique_ptr<SocketChannel>(new SocketChannel(fd));
      }
    }
    if (Clock::now() >= deadline) {
      throw CommError(fmt::format("handshake timeout: {} found no usable token {} from {}", settings.local,
                                  token.string(), settings.remote));
    }
    std::this_thread::sleep_for(settings.pollInterval);
  }
}

SocketChannel::SocketChannel(int fd)
    : _fd(fd)
{
}

SocketChannel::~SocketChannel()
{
  close();
}

void SocketChannel::close()
{
  if (_fd >= 0) {
    ::close(_fd);
    _fd = -1;
  }
}

bool SocketChannel::readAvailable(bool block)
{
  pollfd pfd{_fd, POLLIN, 0};
  const int ready = ::poll(&pfd, 1, block ? -1 : 0);
  if (ready < 0) {
    if (errno == EINTR) {
      return false;
    }
    throw CommError(fmt::format("connection lost: {}", lastError()));
  }
  if (ready == 0) {
    return false;
  }
  std::uint8_t buffer[65536];
  const auto   n = ::recv(_fd, buffer, sizeof(buffer), 0);
  if (n == 0) {
    throw CommError("connection lost");
  }
  if (n < 0) {
    if (errno == EINTR || errno == EAGAIN) {
      return false;
    }
    throw CommError(fmt::format("connection lost: {}", lastError()));
  }
  _inbox.insert(_inbox.end(), buffer, buffer + n);
  return true;
}

void SocketChannel::send(const Frame &frame)
{
  if (_fd < 0) {
    throw CommError("send on closed channel");
  }
  const auto  bytes = encodeFrame(frame);
  std::size_t sent  = 0;
  while (sent < bytes.size()) {
    pollfd pfd{_fd, POLLIN | POLLOUT, 0};
    if (::poll(&pfd, 1, -1) < 0) {
      if (errno == EINTR) {
        continue;
      }
      throw CommError(fmt::format("connection lost: {}", lastError()));
    }
    if (pfd.revents & POLLIN) {
      // Keep draining so that two peers sending large frames at once cannot block each other.
      readAvailable(false);
    }
    if (pfd.revents & (POLLOUT | POLLERR | POLLHUP)) {
      const auto n = ::send(_fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL | MSG_DONTWAIT);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN || errno == EWOULDBLOCK) {
          continue;
        }
        throw CommError(fmt::format("connection lost: {}", lastError()));
      }
      sent += static_cast<std::size_t>(n);
    }
  }
}

Frame SocketChannel::receive()
{
  if (_fd < 0 && _inbox.empty()) {
    throw CommError("receive on closed channel");
  }
  while (true) {
    std::size_t consumed = 0;
    if (auto frame = decodeFrame(_inbox, consumed)) {
      _inbox.erase(_inbox.begin(), _inbox.begin() + static_cast<std::ptrdiff_t>(consumed));
      return std::move(*frame);
    }
    if (_fd < 0) {
      throw CommError("connection lost");
    }
    readAvailable(true);
  }
}

} // namespace duet::com
