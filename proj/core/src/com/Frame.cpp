#include "duet/com/Frame.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fmt/format.h>

#include "duet/Error.hpp"

namespace duet::com {

static_assert(std::endian::native == std::endian::little, "wire format assumes a little-endian host");

const char *toString(FrameKind kind)
{
  switch (kind) {
  case FrameKind::Mesh:
    return "mesh";
  case FrameKind::FieldData:
    return "field-data";
  case FrameKind::WindowControl:
    return "window-control";
  case FrameKind::Shutdown:
    return "shutdown";
  }
  return "unknown";
}

namespace {

template <typename T>
void putLe(std::vector<std::uint8_t> &out, T value)
{
  const auto offset = out.size();
  out.resize(offset + sizeof(T));
  std::memcpy(out.data() + offset, &value, sizeof(T));
}

template <typename T>
T getLe(const std::uint8_t *p)
{
  T value;
  std::memcpy(&value, p, sizeof(T));
  return value;
}

bool validKind(std::uint8_t k)
{
  return k >= 1 && k <= 4;
}

} // namespace

void appendFrame(std::vector<std::uint8_t> &out, const Frame &frame)
{
  out.insert(out.end(), frameMagic.begin(), frameMagic.end());
  out.push_back(static_cast<std::uint8_t>(frame.kind));
  putLe<std::uint64_t>(out, frame.payload.size());
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
}

std::vector<std::uint8_t> encodeFrame(const Frame &frame)
{
  std::vector<std::uint8_t> out;
  out.reserve(frameHeaderSize + frame.payload.size());
  appendFrame(out, frame);
  return out;
}

std::optional<Frame> decodeFrame(std::span<const std::uint8_t> bytes, std::size_t &consumed)
{
  consumed = 0;
  const std::size_t magicBytes = std::min(bytes.size(), frameMagic.size());
  for (std::size_t i = 0; i < magicBytes; ++i) {
    if (bytes[i] != frameMagic[i]) {
      throw CommError(fmt::format("malformed frame at byte {}: bad magic", i));
    }
  }
  if (bytes.size() < 5) {
    return std::nullopt;
  }
  if (!validKind(bytes[4])) {
    throw CommError(fmt::format("malformed frame at byte 4: unknown kind {}", bytes[4]));
  }
  if (bytes.size() < frameHeaderSize) {
    return std::nullopt;
  }
  const auto length = getLe<std::uint64_t>(bytes.data() + 5);
  if (length > (std::uint64_t{1} << 40)) {
    throw CommError(fmt::format("malformed frame at byte 5: payload length {} too large", length));
  }
  if (bytes.size() - frameHeaderSize < length) {
    return std::nullopt;
  }
  Frame frame;
  frame.kind = static_cast<FrameKind>(bytes[4]);
  frame.payload.assign(bytes.begin() + frameHeaderSize, bytes.begin() + frameHeaderSize + static_cast<std::ptrdiff_t>(length));
  consumed = frameHeaderSize + length;
  return frame;
}

Frame decodeFrame(std::span<const std::uint8_t> bytes)
{
  std::size_t consumed = 0;
  auto        frame    = decodeFrame(bytes, consumed);
  if (!frame) {
    throw CommError(fmt::format("malformed frame at byte {}: truncated", bytes.size()));
  }
  if (consumed != bytes.size()) {
    throw CommError(fmt::format("malformed frame at byte {}: trailing bytes", consumed));
  }
  return std::move(*frame);
}

void PayloadWriter::u32(std::uint32_t v)
{
  putLe(_bytes, v);
}

void PayloadWriter::u64(std::uint64_t v)
{
  putLe(_bytes, v);
}

void PayloadWriter::f64(double v)
{
  putLe(_bytes, v);
}

void PayloadWriter::string(const std::string &s)
{
  u32(static_cast<std::uint32_t>(s.size()));
  _bytes.insert(_bytes.end(), s.begin(), s.end());
}

void PayloadWriter::doubles(std::span<const double> values)
{
  const auto offset = _bytes.size();
  _bytes.resize(offset + values.size_bytes());
  if (!values.empty()) {
    std::memcpy(_bytes.data() + offset, values.data(), values.size_bytes());
  }
}

void PayloadReader::need(std::size_t n, const char *what) const
{
  if (_bytes.size() - _pos < n) {
    throw CommError(fmt::format("malformed frame at byte {}: truncated {}", _base + _pos, what));
  }
}

std::uint8_t PayloadReader::u8()
{
  need(1, "u8");
  return _bytes[_pos++];
}

std::uint32_t PayloadReader::u32()
{
  need(4, "u32");
  const auto v = getLe<std::uint32_t>(_bytes.data() + _pos);
  _pos += 4;
  return v;
}

std::uint64_t PayloadReader::u64()
{
  need(8, "u64");
  const auto v = getLe<std::uint64_t>(_bytes.data() + _pos);
  _pos += 8;
  return v;
}

double PayloadReader::f64()
{
  need(8, "f64");
  const auto v = getLe<double>(_bytes.data() + _pos);
  _pos += 8;
  return v;
}

std::string PayloadReader::string()
{
  const auto n = u32();
  need(n, "string");
  std::string s(reinterpret_cast<const char *>(_bytes.data() + _pos), n);
  _pos += n;
  return s;
}

std::vector<double> PayloadReader::doubles(std::size_t count)
{
  if (count > (_bytes.size() - _pos) / 8) {
    throw CommError(fmt::format("malformed frame at byte {}: truncated f64 array", _base + _pos));
  }
  std::vector<double> values(count);
  if (count > 0) {
    std::memcpy(values.data(), _bytes.data() + _pos, count * 8);
  }
  _pos += count * 8;
  return values;
}

void PayloadReader::expectEnd() const
{
  if (_pos != _bytes.size()) {
    throw CommError(fmt::format("malformed frame at byte {}: {} unexpected trailing bytes", _base + _pos,
                                _bytes.size() - _pos));
  }
}

namespace {

void expectKind(const Frame &frame, FrameKind kind)
{
  if (frame.kind != kind) {
    throw CommError(fmt::format("expected {} frame, got {}", toString(kind), toString(frame.kind)));
  }
}

} // namespace

Frame makeMeshFrame(const mesh::Mesh &mesh)
{
  PayloadWriter w;
  w.string(mesh.name());
  w.u32(static_cast<std::uint32_t>(mesh.dimensions()));
  w.u32(static_cast<std::uint32_t>(mesh.vertexCount()));
  const auto coords = mesh.coordinates();
  w.doubles(coords);
  w.u32(static_cast<std::uint32_t>(mesh.edges().size()));
  for (const auto &e : mesh.edges()) {
    w.u32(static_cast<std::uint32_t>(e.vertices[0]));
    w.u32(static_cast<std::uint32_t>(e.vertices[1]));
  }
  w.u32(static_cast<std::uint32_t>(mesh.triangles().size()));
  for (const auto &t : mesh.triangles()) {
    for (auto v : t.vertices) {
      w.u32(static_cast<std::uint32_t>(v));
    }
  }
  return {FrameKind::Mesh, w.take()};
}

mesh::Mesh readMeshFrame(const Frame &frame)
{
  expectKind(frame, FrameKind::Mesh);
  PayloadReader r(frame.payload);
  auto          name  = r.string();
  const auto    dims  = r.u32();
  const auto    count = r.u32();
  if (dims != 2 && dims != 3) {
    throw CommError(fmt::format("mesh frame: invalid dimension {}", dims));
  }
  const auto coords = r.doubles(std::size_t{count} * dims);
  try {
    mesh::Mesh mesh(std::move(name), static_cast<int>(dims));
    for (std::size_t i = 0; i < count; ++i) {
      mesh.addVertex(std::span<const double>(coords.data() + i * dims, dims));
    }
    const auto edges = r.u32();
    for (std::uint32_t i = 0; i < edges; ++i) {
      const auto a = r.u32();
      const auto b = r.u32();
      mesh.addEdge(static_cast<mesh::VertexID>(a), static_cast<mesh::VertexID>(b));
    }
    const auto triangles = r.u32();
    for (std::uint32_t i = 0; i < triangles; ++i) {
      const auto a = r.u32();
      const auto b = r.u32();
      const auto c = r.u32();
      mesh.addTriangle(static_cast<mesh::VertexID>(a), static_cast<mesh::VertexID>(b),
                       static_cast<mesh::VertexID>(c));
    }
    r.expectEnd();
    return mesh;
  } catch (const CommError &) {
    throw;
  } catch (const Error &e) {
    throw CommError(fmt::format("mesh frame: {}", e.what()));
  }
}

Frame makeFieldFrame(const FieldData &field)
{
  PayloadWriter w;
  w.string(field.data);
  w.string(field.mesh);
  w.u32(field.components);
  w.u32(static_cast<std::uint32_t>(field.values.size()));
  w.doubles(std::span<const double>(field.values.data(), static_cast<std::size_t>(field.values.size())));
  return {FrameKind::FieldData, w.take()};
}

FieldData readFieldFrame(const Frame &frame)
{
  expectKind(frame, FrameKind::FieldData);
  PayloadReader r(frame.payload);
  FieldData     field;
  field.data       = r.string();
  field.mesh       = r.string();
  field.components = r.u32();
  const auto count = r.u32();
  const auto v     = r.doubles(count);
  r.expectEnd();
  field.values = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  return field;
}

Frame makeControlFrame(const WindowControl &control)
{
  PayloadWriter w;
  w.u8(static_cast<std::uint8_t>(control.action));
  w.u32(control.window);
  w.u32(control.iteration);
  w.string(control.text);
  return {FrameKind::WindowControl, w.take()};
}

WindowControl readControlFrame(const Frame &frame)
{
  expectKind(frame, FrameKind::WindowControl);
  PayloadReader r(frame.payload);
  WindowControl control;
  const auto    action = r.u8();
  if (action > 2) {
    throw CommError(fmt::format("malformed frame at byte {}: unknown control action {}", frameHeaderSize, action));
  }
  control.action    = static_cast<ControlAction>(action);
  control.window    = r.u32();
  control.iteration = r.u32();
  control.text      = r.string();
  r.expectEnd();
  return control;
}

Frame makeShutdownFrame(const std::string &reason)
{
  PayloadWriter w;
  w.string(reason);
  return {FrameKind::Shutdown, w.take()};
}

std::string readShutdownFrame(const Frame &frame)
{
  expectKind(frame, FrameKind::Shutdown);
  PayloadReader r(frame.payload);
  auto          reason = r.string();
  r.expectEnd();
  return reason;
}

} // namespace duet::com
