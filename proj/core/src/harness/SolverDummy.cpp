#include "duet/harness/SolverDummy.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <map>
#include <ostream>

#include "duet/Error.hpp"
#include "duet/api/Participant.hpp"

namespace duet::harness {

SolverDummyRun runSolverDummy(Participant &participant, int vertices, std::ostream *log)
{
  if (vertices < 1) {
    throw Error(fmt::format("solverdummy needs at least one vertex, got {}", vertices));
  }
  const auto &config = participant.configuration();
  const auto *self   = config.findParticipant(participant.name());
  const int   dims   = participant.dimensions();

  std::map<std::string, std::vector<mesh::VertexID>> ids;
  for (const auto &use : self->meshes) {
    if (!use.provide) {
      continue;
    }
    std::vector<double> coordinates(static_cast<std::size_t>(vertices * dims), 0.0);
    for (int i = 0; i < vertices; ++i) {
      coordinates[static_cast<std::size_t>(i * dims)] = i;
    }
    ids[use.name] = participant.setMeshVertices(use.name, coordinates);
  }

  struct Buffer {
    const config::DataAccess *access;
    std::vector<double>       values;
  };
  std::vector<Buffer> reads;
  std::vector<Buffer> writes;
  for (const auto &r : self->readData) {
    reads.push_back({&r, std::vector<double>(ids.at(r.mesh).size() * static_cast<std::size_t>(config.components(r.data)))});
  }
  for (const auto &w : self->writeData) {
    const auto components = static_cast<std::size_t>(config.components(w.data));
    Buffer     b{&w, std::vector<double>(ids.at(w.mesh).size() * components)};
    for (std::size_t k = 0; k < b.values.size(); ++k) {
      b.values[k] = static_cast<double>(k / components);
    }
    writes.push_back(std::move(b));
  }

  double         dt = participant.initialize();
  SolverDummyRun run;
  while (participant.isCouplingOngoing()) {
    if (participant.isActionRequired(ActionFlag::WriteIterationCheckpoint)) {
      participant.markActionFulfilled(ActionFlag::WriteIterationCheckpoint);
    }
    for (auto &r : reads) {
      participant.readData(r.access->mesh, r.access->data, ids.at(r.access->mesh), r.values);
    }
    for (auto &w : writes) {
      for (const auto &r : reads) {
        if (r.values.size() == w.values.size() && config.components(r.access->data) == config.components(w.access->data)) {
          w.values = r.values;
          break;
        }
      }
      participant.writeData(w.access->mesh, w.access->data, ids.at(w.access->mesh), w.values);
    }
    const int windows = participant.completedWindows();
    dt                = participant.advance(dt);
    ++run.exchanges;
    if (participant.isActionRequired(ActionFlag::ReadIterationCheckpoint)) {
      participant.markActionFulfilled(ActionFlag::ReadIterationCheckpoint);
    }
    if (log && participant.completedWindows() > windows) {
      fmt::print(*log, "{}: window {} done at t={}\n", participant.name(), participant.completedWindows(),
                 participant.time());
    }
  }
  run.windows         = participant.completedWindows();
  run.totalIterations = participant.totalIterations();
  participant.finalize();
  return run;
}

} // namespace duet::harness
