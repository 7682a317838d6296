#include "duet/api/Participant.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fmt/format.h>
#include <map>
#include <optional>

#include "duet/Error.hpp"
#include "duet/api/Watchpoint.hpp"
#include "duet/com/SocketChannel.hpp"
#include "duet/com/Token.hpp"
#include "duet/cplscheme/CouplingScheme.hpp"
#include "duet/mapping/MappingOperator.hpp"
#include "duet/mapping/RadialBasis.hpp"

namespace duet {

using cplscheme::DataKey;

std::string_view toString(ActionFlag flag)
{
  return flag == ActionFlag::WriteIterationCheckpoint ? "write-iteration-checkpoint" : "read-iteration-checkpoint";
}

std::string_view toString(LifecyclePhase phase)
{
  switch (phase) {
  case LifecyclePhase::Constructed:
    return "constructed";
  case LifecyclePhase::Initialized:
    return "initialized";
  case LifecyclePhase::Finalized:
    return "finalized";
  }
  return "unknown";
}

namespace {

cplscheme::Action toAction(ActionFlag flag)
{
  return flag == ActionFlag::WriteIterationCheckpoint ? cplscheme::Action::WriteCheckpoint
                                                      : cplscheme::Action::ReadCheckpoint;
}

mapping::RadialBasis makeBasis(const config::MappingDecl &decl)
{
  switch (*decl.basis) {
  case mapping::BasisKind::Gaussian:
    return mapping::RadialBasis::gaussian(decl.supportRadius);
  case mapping::BasisKind::ThinPlateSplines:
    return mapping::RadialBasis::thinPlateSplines();
  case mapping::BasisKind::CompactThinPlateSplinesC2:
    return mapping::RadialBasis::compactThinPlateSplinesC2(decl.supportRadius);
  }
  throw Error("unknown radial basis");
}

mapping::MappingOperator buildOperator(const config::MappingDecl &decl, const mesh::Mesh &in, const mesh::Mesh &out)
{
  switch (decl.kind) {
  case mapping::MappingKind::NearestNeighbor:
    return mapping::buildNearestNeighbor(in, out, decl.constraint);
  case mapping::MappingKind::NearestProjection:
    return mapping::buildNearestProjection(in, out, decl.constraint);
  case mapping::MappingKind::RadialBasisFunction:
    return mapping::buildRadialBasis(in, out, decl.constraint, makeBasis(decl), decl.polynomial);
  }
  throw Error("unknown mapping kind");
}

} // namespace

struct Participant::Impl {
  struct Buffer {
    int             components = 1;
    Eigen::VectorXd values;
    bool            read  = false;
    bool            write = false;
  };

  struct Transfer {
    DataKey                         source;
    DataKey                         target;
    const mapping::MappingOperator *op = nullptr; // copy when null
  };

  struct Probe {
    std::unique_ptr<Watchpoint>          log;
    std::vector<const Eigen::VectorXd *> fields;
  };

  std::string                  name;
  std::string                  peer;
  config::CouplingConfig       config;
  const config::ParticipantDecl *decl = nullptr;
  ParticipantOptions           options;
  LifecyclePhase               phase = LifecyclePhase::Constructed;

  std::map<std::string, mesh::Mesh, std::less<>> meshes;
  std::map<DataKey, Buffer>                      buffers;
  std::deque<mapping::MappingOperator>           operators;
  std::vector<Transfer>                          writeTransfers;
  std::vector<Transfer>                          readTransfers;
  std::shared_ptr<com::Channel>                  channel;
  std::unique_ptr<cplscheme::CouplingScheme>     scheme;
  std::vector<Probe>                             probes;
  std::vector<std::string>                       warnings;

  Impl(std::string participant, config::CouplingConfig cfg, int rank, int size, ParticipantOptions opts)
      : name(std::move(participant)), config(std::move(cfg)), options(std::move(opts))
  {
    if (rank != 0 || size != 1) {
      throw Error(fmt::format("participant \"{}\": rank {} of {} requested, but only single-rank participants (0 of "
                              "1) are supported",
                              name, rank, size));
    }
    const auto diagnostics = config::validate(config);
    if (config::hasErrors(diagnostics)) {
      std::string message = "invalid configuration:";
      for (const auto &d : diagnostics) {
        if (d.severity == config::Severity::Error) {
          message += "\n  " + config::toString(d);
        }
      }
      throw ConfigError(message);
    }
    decl = config.findParticipant(name);
    if (decl == nullptr) {
      std::string known;
      for (const auto &p : config.participants) {
        known += (known.empty() ? "" : ", ") + p.name;
      }
      throw Error(fmt::format("unknown participant \"{}\"; configured participants: {}", name, known));
    }
    peer = config.scheme.first == name ? config.scheme.second : config.scheme.first;
  }

  void requirePhase(std::string_view operation, LifecyclePhase wanted) const
  {
    if (phase == wanted) {
      return;
    }
    std::string hint;
    if (phase == LifecyclePhase::Constructed && wanted == LifecyclePhase::Initialized) {
      hint = "; call initialize first";
    } else if (phase == LifecyclePhase::Finalized) {
      hint = "; the participant was finalized";
    } else if (wanted == LifecyclePhase::Constructed) {
      hint = "; only allowed before initialize";
    }
    throw PhaseError(fmt::format("{} is not allowed in phase {} (requires {}){}", operation, toString(phase),
                                 toString(wanted), hint));
  }

  mesh::Mesh &providedMesh(std::string_view meshName)
  {
    if (!config.findMesh(meshName)) {
      throw Error(fmt::format("unknown mesh \"{}\"", meshName));
    }
    if (!decl->provides(meshName)) {
      throw Error(fmt::format("participant \"{}\" does not provide mesh \"{}\"", name, meshName));
    }
    if (meshes.count(std::string(meshName))) {
      throw PhaseError(fmt::format("mesh already set: \"{}\"", meshName));
    }
    return meshes.emplace(std::string(meshName), mesh::Mesh(std::string(meshName), config.dimensions)).first->second;
  }

  std::string configDigest() const { return com::sha256Hex(config::toXml(config)); }

  void connect()
  {
    if (options.channel) {
      channel = options.channel;
    } else {
      com::ConnectionSettings settings;
      settings.local             = name;
      settings.remote            = peer;
      settings.acceptor          = config.m2n.to == name;
      settings.exchangeDirectory = options.exchangeDirectory.empty()
                                       ? std::filesystem::path(config.m2n.exchangeDirectory)
                                       : options.exchangeDirectory;
      settings.timeout           = options.handshakeTimeout;
      channel                    = com::SocketChannel::connect(settings);
    }
    channel->sendControl({com::ControlAction::Hello, 0, 0, name + "\n" + configDigest()});
    const auto frame = channel->receive();
    if (frame.kind != com::FrameKind::WindowControl) {
      throw CommError(fmt::format("expected hello from \"{}\", got a {} frame", peer, com::toString(frame.kind)));
    }
    const auto hello = com::readControlFrame(frame);
    const auto split = hello.text.find('\n');
    if (hello.action != com::ControlAction::Hello || split == std::string::npos) {
      throw CommError(fmt::format("expected hello from \"{}\"", peer));
    }
    const auto remoteName   = hello.text.substr(0, split);
    const auto remoteDigest = hello.text.substr(split + 1);
    if (remoteName != peer) {
      throw CommError(fmt::format("\"{}\" expected to connect to \"{}\" but \"{}\" answered", name, peer, remoteName));
    }
    if (remoteDigest != configDigest()) {
      throw CommError(fmt::format("configuration mismatch between \"{}\" and \"{}\": both must use the same "
                                  "configuration",
                                  name, peer));
    }
  }

  void exchangeMeshes()
  {
    const auto *remote = config.findParticipant(peer);
    for (const auto &use : remote->meshes) {
      if (use.from == name) {
        channel->send(com::makeMeshFrame(meshes.at(use.name)));
      }
    }
    for (const auto &use : decl->meshes) {
      if (use.from != peer) {
        continue;
      }
      auto received = com::readMeshFrame(channel->receive());
      if (received.name() != use.name) {
        throw CommError(fmt::format("expected mesh \"{}\" from \"{}\", received \"{}\"", use.name, peer,
                                    received.name()));
      }
      if (received.dimensions() != config.dimensions || received.empty()) {
        throw CommError(fmt::format("mesh \"{}\" from \"{}\" has {} vertices in {}D; expected a non-empty {}D mesh",
                                    use.name, peer, received.vertexCount(), received.dimensions(), config.dimensions));
      }
      meshes.emplace(use.name, std::move(received));
    }
  }

  void createBuffers()
  {
    auto add = [&](const config::DataAccess &access, bool read) {
      auto &buffer      = buffers[{access.data, access.mesh}];
      buffer.components = config.components(access.data);
      buffer.values     = Eigen::VectorXd::Zero(
          static_cast<Eigen::Index>(meshes.at(access.mesh).vertexCount()) * buffer.components);
      (read ? buffer.read : buffer.write) = true;
    };
    for (const auto &w : decl->writeData) {
      add(w, false);
    }
    for (const auto &r : decl->readData) {
      add(r, true);
    }
  }

  void createTransfers()
  {
    std::vector<std::pair<const config::MappingDecl *, const mapping::MappingOperator *>> built;
    for (const auto &m : decl->mappings) {
      operators.push_back(buildOperator(m, meshes.at(m.from), meshes.at(m.to)));
      built.emplace_back(&m, &operators.back());
    }
    for (const auto &e : config.scheme.exchanges) {
      const DataKey key = e.key();
      if (e.from == name) {
        if (auto it = buffers.find(key); it != buffers.end() && it->second.write) {
          writeTransfers.push_back({key, key, nullptr});
          continue;
        }
        bool found = false;
        for (const auto &[m, op] : built) {
          auto it = buffers.find({e.data, m->from});
          if (m->to == e.mesh && it != buffers.end() && it->second.write) {
            writeTransfers.push_back({{e.data, m->from}, key, op});
            found = true;
            break;
          }
        }
        if (!found) {
          throw ConfigError(fmt::format("participant \"{}\" has no source for sent data {}", name, toString(key)));
        }
      }
    }
    for (const auto &r : decl->readData) {
      const DataKey target{r.data, r.mesh};
      bool          found = false;
      for (const auto &e : config.scheme.exchanges) {
        if (e.to == name && e.key() == target) {
          readTransfers.push_back({target, target, nullptr});
          found = true;
        }
      }
      for (const auto &[m, op] : built) {
        if (found) {
          break;
        }
        for (const auto &e : config.scheme.exchanges) {
          if (m->to == r.mesh && e.to == name && e.data == r.data && e.mesh == m->from) {
            readTransfers.push_back({e.key(), target, op});
            found = true;
            break;
          }
        }
      }
      if (!found) {
        throw ConfigError(fmt::format("participant \"{}\" never receives read data {}", name, toString(target)));
      }
    }
  }

  Eigen::VectorXd transfer(const Transfer &t, const Eigen::VectorXd &source, int components) const
  {
    if (t.op == nullptr) {
      return source;
    }
    const auto     &in = meshes.at(t.op->inputMesh());
    mesh::DataField field(t.source.data, in.name(), components, in.vertexCount());
    field.values = source;
    return t.op->apply(field).values;
  }

  void mapWrite()
  {
    for (const auto &t : writeTransfers) {
      const auto &buffer        = buffers.at(t.source);
      scheme->values(t.target) = transfer(t, buffer.values, buffer.components);
    }
  }

  void mapRead()
  {
    for (const auto &t : readTransfers) {
      auto &buffer  = buffers.at(t.target);
      buffer.values = transfer(t, scheme->values(t.source), buffer.components);
    }
  }

  void createScheme()
  {
    std::map<DataKey, cplscheme::DataShape> shapes;
    for (const auto &e : config.scheme.exchanges) {
      shapes[e.key()] = {static_cast<Eigen::Index>(meshes.at(e.mesh).vertexCount()), config.components(e.data)};
    }
    scheme = std::make_unique<cplscheme::CouplingScheme>(
        config.scheme, name, *channel, shapes, cplscheme::SchemeHooks{[this] { mapWrite(); }, [this] { mapRead(); }});
  }

  void createProbes()
  {
    for (const auto &w : decl->watchPoints) {
      Probe                          probe;
      std::vector<Watchpoint::Column> columns;
      for (const auto &data : config.findMesh(w.mesh)->useData) {
        const DataKey          key{data, w.mesh};
        const Eigen::VectorXd *field = nullptr;
        if (auto it = buffers.find(key); it != buffers.end()) {
          field = &it->second.values;
        } else if (scheme->sends(key) || scheme->receives(key)) {
          field = &scheme->values(key);
        }
        if (field) {
          columns.push_back({data, config.components(data)});
          probe.fields.push_back(field);
        }
      }
      mesh::Vector3 point = mesh::Vector3::Zero();
      for (std::size_t d = 0; d < w.coordinate.size() && d < 3; ++d) {
        point[static_cast<Eigen::Index>(d)] = w.coordinate[d];
      }
      probe.log = std::make_unique<Watchpoint>(w.name, meshes.at(w.mesh), point, std::move(columns),
                                               options.outputDirectory);
      probes.push_back(std::move(probe));
    }
  }

  Buffer &buffer(std::string_view meshName, std::string_view data, bool forWrite)
  {
    auto it = buffers.find({std::string(data), std::string(meshName)});
    if (it == buffers.end()) {
      throw Error(fmt::format("participant \"{}\" has no {}-data \"{}\" on mesh \"{}\"", name,
                              forWrite ? "write" : "read", data, meshName));
    }
    if (forWrite && !it->second.write) {
      throw Error(fmt::format("data \"{}\" on mesh \"{}\" is read-only for participant \"{}\"", data, meshName, name));
    }
    if (!forWrite && !it->second.read) {
      throw Error(fmt::format("data \"{}\" on mesh \"{}\" is write-only for participant \"{}\"", data, meshName, name));
    }
    return it->second;
  }

  void checkAccess(const Buffer &b, std::span<const mesh::VertexID> ids, std::size_t valueCount) const
  {
    const auto vertices = static_cast<mesh::VertexID>(b.values.size() / b.components);
    for (auto id : ids) {
      if (id < 0 || id >= vertices) {
        throw Error(fmt::format("vertex id {} out of range (mesh has {} vertices)", id, vertices));
      }
    }
    if (valueCount != ids.size() * static_cast<std::size_t>(b.components)) {
      throw Error(fmt::format("expected {} values for {} vertices with {} components, got {}",
                              ids.size() * static_cast<std::size_t>(b.components), ids.size(), b.components,
                              valueCount));
    }
  }
};

Participant::Participant(std::string name, const std::filesystem::path &configFile, int rank, int size,
                         ParticipantOptions options)
    : Participant(std::move(name), config::parseFile(configFile.string()), rank, size, std::move(options))
{
}

Participant::Participant(std::string name, config::CouplingConfig config, int rank, int size,
                         ParticipantOptions options)
    : _impl(std::make_unique<Impl>(std::move(name), std::move(config), rank, size, std::move(options)))
{
}

Participant::~Participant()
{
  if (_impl && _impl->channel) {
    _impl->channel->close();
  }
}

Participant::Participant(Participant &&) noexcept            = default;
Participant &Participant::operator=(Participant &&) noexcept = default;

const std::string &Participant::name() const
{
  return _impl->name;
}

int Participant::dimensions() const
{
  return _impl->config.dimensions;
}

LifecyclePhase Participant::phase() const
{
  return _impl->phase;
}

const config::CouplingConfig &Participant::configuration() const
{
  return _impl->config;
}

std::vector<mesh::VertexID> Participant::setMeshVertices(std::string_view meshName, std::span<const double> coordinates)
{
  _impl->requirePhase("setMeshVertices", LifecyclePhase::Constructed);
  const auto dims = static_cast<std::size_t>(dimensions());
  if (coordinates.empty() || coordinates.size() % dims != 0) {
    throw Error(fmt::format("setMeshVertices on \"{}\": {} coordinates do not form {}D vertices", meshName,
                            coordinates.size(), dims));
  }
  auto &mesh = _impl->providedMesh(meshName);
  std::vector<mesh::VertexID> ids;
  try {
    for (std::size_t i = 0; i < coordinates.size(); i += dims) {
      ids.push_back(mesh.addVertex(coordinates.subspan(i, dims)));
    }
  } catch (...) {
    _impl->meshes.erase(std::string(meshName));
    throw;
  }
  return ids;
}

void Participant::setMesh(const mesh::Mesh &input)
{
  _impl->requirePhase("setMesh", LifecyclePhase::Constructed);
  if (input.dimensions() != dimensions()) {
    throw Error(fmt::format("setMesh: mesh \"{}\" is {}D, configuration is {}D", input.name(), input.dimensions(),
                            dimensions()));
  }
  if (input.empty()) {
    throw Error(fmt::format("setMesh: mesh \"{}\" has no vertices", input.name()));
  }
  _impl->providedMesh(input.name()) = input;
}

double Participant::initialize()
{
  auto &impl = *_impl;
  impl.requirePhase("initialize", LifecyclePhase::Constructed);
  for (const auto &use : impl.decl->meshes) {
    if (use.provide && !impl.meshes.count(use.name)) {
      throw PhaseError(fmt::format("initialize: provided mesh \"{}\" has no vertices; call setMeshVertices first",
                              use.name));
    }
  }
  impl.connect();
  impl.exchangeMeshes();
  impl.createBuffers();
  impl.createTransfers();
  impl.createScheme();
  impl.createProbes();
  const double dt = impl.scheme->initialize();
  impl.phase      = LifecyclePhase::Initialized;
  return dt;
}

double Participant::advance(double dt)
{
  auto &impl = *_impl;
  impl.requirePhase("advance", LifecyclePhase::Initialized);
  const double next = impl.scheme->advance(dt);
  if (impl.scheme->windowCompletedLastAdvance()) {
    for (auto &probe : impl.probes) {
      probe.log->record(impl.scheme->time(), probe.fields);
    }
  }
  return next;
}

void Participant::finalize()
{
  auto &impl = *_impl;
  if (impl.phase == LifecyclePhase::Finalized) {
    throw PhaseError("finalize is not allowed in phase finalized (finalize was already called)");
  }
  if (impl.phase == LifecyclePhase::Initialized) {
    if (impl.scheme->isCouplingOngoing()) {
      impl.warnings.push_back(fmt::format("participant \"{}\" finalized at t={} before the coupling ended", impl.name,
                                          impl.scheme->time()));
    } else if (impl.scheme->state().window.accumulated > 0.0) {
      impl.warnings.push_back(fmt::format("participant \"{}\" finalized with an unexchanged window in progress",
                                          impl.name));
    }
    try {
      impl.channel->send(com::makeShutdownFrame("finalize"));
      while (impl.channel->receive().kind != com::FrameKind::Shutdown) {
      }
    } catch (const CommError &e) {
      impl.warnings.push_back(fmt::format("shutdown handshake with \"{}\" incomplete: {}", impl.peer, e.what()));
    }
    impl.channel->close();
  }
  impl.phase = LifecyclePhase::Finalized;
}

bool Participant::isCouplingOngoing() const
{
  _impl->requirePhase("isCouplingOngoing", LifecyclePhase::Initialized);
  return _impl->scheme->isCouplingOngoing();
}

bool Participant::isActionRequired(ActionFlag flag) const
{
  _impl->requirePhase("isActionRequired", LifecyclePhase::Initialized);
  return _impl->scheme->isActionRequired(toAction(flag));
}

void Participant::markActionFulfilled(ActionFlag flag)
{
  _impl->requirePhase("markActionFulfilled", LifecyclePhase::Initialized);
  _impl->scheme->markActionFulfilled(toAction(flag));
}

void Participant::writeData(std::string_view meshName, std::string_view data, std::span<const mesh::VertexID> ids,
                            std::span<const double> values)
{
  auto &impl = *_impl;
  impl.requirePhase("writeData", LifecyclePhase::Initialized);
  if (!impl.scheme->isCouplingOngoing()) {
    throw PhaseError(fmt::format("writeData of \"{}\" after the end of the coupling", data));
  }
  auto &b = impl.buffer(meshName, data, true);
  impl.checkAccess(b, ids, values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(fmt::format("writeData of \"{}\": non-finite value", data));
    }
  }
  const auto k = static_cast<std::size_t>(b.components);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      b.values[static_cast<Eigen::Index>(static_cast<std::size_t>(ids[i]) * k + c)] = values[i * k + c];
    }
  }
}

void Participant::readData(std::string_view meshName, std::string_view data, std::span<const mesh::VertexID> ids,
                           std::span<double> values) const
{
  auto &impl = *_impl;
  impl.requirePhase("readData", LifecyclePhase::Initialized);
  const auto &b = impl.buffer(meshName, data, false);
  impl.checkAccess(b, ids, values.size());
  const auto k = static_cast<std::size_t>(b.components);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      values[i * k + c] = b.values[static_cast<Eigen::Index>(static_cast<std::size_t>(ids[i]) * k + c)];
    }
  }
}

std::vector<double> Participant::readData(std::string_view meshName, std::string_view data,
                                          std::span<const mesh::VertexID> ids) const
{
  _impl->requirePhase("readData", LifecyclePhase::Initialized);
  const auto         &b = _impl->buffer(meshName, data, false);
  std::vector<double> values(ids.size() * static_cast<std::size_t>(b.components));
  readData(meshName, data, ids, values);
  return values;
}

const mesh::Mesh &Participant::getMesh(std::string_view meshName) const
{
  auto it = _impl->meshes.find(meshName);
  if (it == _impl->meshes.end()) {
    throw Error(fmt::format("mesh \"{}\" is not available to participant \"{}\"", meshName, _impl->name));
  }
  return it->second;
}

double Participant::time() const
{
  _impl->requirePhase("time", LifecyclePhase::Initialized);
  return _impl->scheme->time();
}

int Participant::completedWindows() const
{
  return _impl->scheme ? _impl->scheme->state().completedWindows : 0;
}

int Participant::totalIterations() const
{
  return _impl->scheme ? _impl->scheme->totalIterations() : 0;
}

int Participant::forcedWindows() const
{
  return _impl->scheme ? _impl->scheme->forcedWindows() : 0;
}

const std::vector<std::string> &Participant::warnings() const
{
  return _impl->warnings;
}

} // namespace duet
