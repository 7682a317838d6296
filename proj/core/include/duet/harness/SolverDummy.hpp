#pragma once

#include <iosfwd>

namespace duet {
class Participant;
}

namespace duet::harness {

struct SolverDummyRun {
  int windows         = 0;
  int totalIterations = 0;
  int exchanges       = 0; ///< advance calls that exchanged data
};

/// Pass-through participant: provides `vertices` points along the x axis on
/// each mesh it provides, copies read data into write data of the same shape
/// and advances with the window size until the coupling ends. Write data
/// without a matching read source starts at the vertex index.
SolverDummyRun runSolverDummy(Participant &participant, int vertices, std::ostream *log = nullptr);

} // namespace duet::harness
