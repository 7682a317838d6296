#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "duet/com/Channel.hpp"
#include "duet/config/Config.hpp"
#include "duet/mesh/Mesh.hpp"

namespace duet {

enum class ActionFlag { WriteIterationCheckpoint, ReadIterationCheckpoint };

enum class LifecyclePhase { Constructed, Initialized, Finalized };

std::string_view toString(ActionFlag flag);
std::string_view toString(LifecyclePhase phase);

struct ParticipantOptions {
  std::chrono::milliseconds handshakeTimeout{30000};
  /// Directory for watch-point CSV files.
  std::filesystem::path outputDirectory = ".";
  /// Overrides the m2n exchange-directory when non-empty.
  std::filesystem::path exchangeDirectory;
  /// Pre-connected channel (e.g. an in-process pair); sockets are used when null.
  std::shared_ptr<com::Channel> channel;
};

/// Solver-facing coupling handle:
///
///     Participant p("Fluid", "coupling.xml");
///     auto ids = p.setMeshVertices("Fluid-Mesh", coords);
///     double dt = p.initialize();
///     while (p.isCouplingOngoing()) {
///       if (p.isActionRequired(ActionFlag::WriteIterationCheckpoint)) { ...; p.markActionFulfilled(...); }
///       p.readData(...); solve(dt); p.writeData(...);
///       dt = p.advance(dt);
///       if (p.isActionRequired(ActionFlag::ReadIterationCheckpoint)) { ...; p.markActionFulfilled(...); }
///     }
///     p.finalize();
///
/// Calls outside their lifecycle phase throw PhaseError.
class Participant {
public:
  Participant(std::string name, const std::filesystem::path &configFile, int rank = 0, int size = 1,
              ParticipantOptions options = {});
  Participant(std::string name, config::CouplingConfig config, int rank = 0, int size = 1,
              ParticipantOptions options = {});
  ~Participant();

  Participant(const Participant &)            = delete;
  Participant &operator=(const Participant &) = delete;
  Participant(Participant &&) noexcept;
  Participant &operator=(Participant &&) noexcept;

  const std::string            &name() const;
  int                           dimensions() const;
  LifecyclePhase                phase() const;
  const config::CouplingConfig &configuration() const;

  /// Registers the vertices of a provided mesh (dimensions() values each);
  /// returns ids 0..n-1. Once per mesh.
  std::vector<mesh::VertexID> setMeshVertices(std::string_view mesh, std::span<const double> coordinates);
  /// Registers a provided mesh including edges/triangles, e.g. read from file.
  void setMesh(const mesh::Mesh &mesh);

  double initialize();
  double advance(double dt);
  void   finalize();

  bool isCouplingOngoing() const;
  bool isActionRequired(ActionFlag flag) const;
  void markActionFulfilled(ActionFlag flag);

  void writeData(std::string_view mesh, std::string_view data, std::span<const mesh::VertexID> ids,
                 std::span<const double> values);
  void readData(std::string_view mesh, std::string_view data, std::span<const mesh::VertexID> ids,
                std::span<double> values) const;
  std::vector<double> readData(std::string_view mesh, std::string_view data,
                               std::span<const mesh::VertexID> ids) const;

  /// Mesh as known to this participant (provided, or received during initialize).
  const mesh::Mesh &getMesh(std::string_view mesh) const;

  double time() const;
  int    completedWindows() const;
  int    totalIterations() const;
  int    forcedWindows() const;
  /// Non-fatal diagnostics (e.g. finalize in the middle of a window).
  const std::vector<std::string> &warnings() const;

private:
  struct Impl;
  std::unique_ptr<Impl> _impl;
};

} // namespace duet
