#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "duet/mesh/Mesh.hpp"

namespace duet::com {

enum class FrameKind : std::uint8_t { Mesh = 1, FieldData = 2, WindowControl = 3, Shutdown = 4 };

const char *toString(FrameKind kind);

/// Wire frame: "PCM1", u8 kind, u64 little-endian payload length, payload.
struct Frame {
  FrameKind                 kind = FrameKind::Shutdown;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const Frame &, const Frame &) = default;
};

inline constexpr std::array<std::uint8_t, 4> frameMagic{'P', 'C', 'M', '1'};
inline constexpr std::size_t                 frameHeaderSize = 13;

std::vector<std::uint8_t> encodeFrame(const Frame &frame);
void                      appendFrame(std::vector<std::uint8_t> &out, const Frame &frame);

/// Decodes the frame at the front of `bytes`. Returns nullopt while the frame
/// is incomplete; throws CommError with the byte offset on a malformed header.
std::optional<Frame> decodeFrame(std::span<const std::uint8_t> bytes, std::size_t &consumed);

/// Decodes exactly one frame; truncated input or trailing bytes are errors.
Frame decodeFrame(std::span<const std::uint8_t> bytes);

class PayloadWriter {
public:
  void u8(std::uint8_t v) { _bytes.push_back(v); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void string(const std::string &s);
  void doubles(std::span<const double> values);

  std::vector<std::uint8_t> take() { return std::move(_bytes); }

private:
  std::vector<std::uint8_t> _bytes;
};

class PayloadReader {
public:
  explicit PayloadReader(std::span<const std::uint8_t> bytes, std::size_t baseOffset = frameHeaderSize)
      : _bytes(bytes), _base(baseOffset)
  {
  }

  std::uint8_t        u8();
  std::uint32_t       u32();
  std::uint64_t       u64();
  double              f64();
  std::string         string();
  std::vector<double> doubles(std::size_t count);
  void                expectEnd() const;

private:
  void need(std::size_t n, const char *what) const;

  std::span<const std::uint8_t> _bytes;
  std::size_t                   _pos = 0;
  std::size_t                   _base;
};

struct FieldData {
  std::string     data;
  std::string     mesh;
  std::uint32_t   components = 1;
  Eigen::VectorXd values;

  friend bool operator==(const FieldData &a, const FieldData &b)
  {
    return a.data == b.data && a.mesh == b.mesh && a.components == b.components &&
           a.values.size() == b.values.size() && a.values == b.values;
  }
};

enum class ControlAction : std::uint8_t { Hello = 0, Iterate = 1, Converged = 2 };

struct WindowControl {
  ControlAction action    = ControlAction::Iterate;
  std::uint32_t window    = 0;
  std::uint32_t iteration = 0;
  std::string   text;

  friend bool operator==(const WindowControl &, const WindowControl &) = default;
};

Frame      makeMeshFrame(const mesh::Mesh &mesh);
mesh::Mesh readMeshFrame(const Frame &frame);

Frame     makeFieldFrame(const FieldData &field);
FieldData readFieldFrame(const Frame &frame);

Frame         makeControlFrame(const WindowControl &control);
WindowControl readControlFrame(const Frame &frame);

Frame       makeShutdownFrame(const std::string &reason = {});
std::string readShutdownFrame(const Frame &frame);

} // namespace duet::com
