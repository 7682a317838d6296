#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace duet {
class Participant;
}

namespace duet::harness {

enum class InitialCondition { Sine, Uniform };

/// u_t = alpha u_xx on [0,1], interface at x = 0.5, implicit Euler in time and
/// central differences in space. The left half may use a different diffusivity
/// than the right half. Flux is positive in +x.
struct Heat1dProblem {
  int              pointsPerSide = 50; ///< including the interface node
  double           alphaLeft     = 1.0;
  double           alphaRight    = 1.0;
  double           dt            = 0.01;
  double           endTime       = 0.2;
  InitialCondition initial       = InitialCondition::Sine;
  double           uniformValue  = 1.0;
  double           leftValue     = 0.0; ///< u(0, t)
  double           rightValue    = 0.0; ///< u(1, t)

  int    intervalsPerSide() const { return pointsPerSide - 1; }
  double spacing() const { return 0.5 / intervalsPerSide(); }
  int    steps() const;
  void   check() const;
};

struct Heat1dSolution {
  std::vector<double> x;
  std::vector<double> u;
};

/// Solves a x_{i-1} + b x_i + c x_{i+1} = d (a[0] and c[n-1] unused).
std::vector<double> solveTridiagonal(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                                     std::vector<double> d);

/// Initial state on all 2M+1 grid points.
Heat1dSolution initialState(const Heat1dProblem &problem);

/// One implicit Euler step of the unsplit problem.
std::vector<double> monolithicStep(const Heat1dProblem &problem, const std::vector<double> &u);

Heat1dSolution solveMonolithic(const Heat1dProblem &problem);

enum class Heat1dSide { Dirichlet, Neumann };

Heat1dSide heat1dSideFromString(std::string_view side);

/// Left half: nodes 0..M, interface temperature imposed at node M.
/// Returns the interface flux of the half cell at x = 0.5.
double dirichletStep(const Heat1dProblem &problem, std::vector<double> &u, const std::vector<double> &old,
                     double interfaceTemperature, double dt);

/// Right half: nodes M..2M, interface flux imposed on the half cell at node M.
/// Returns the interface temperature.
double neumannStep(const Heat1dProblem &problem, std::vector<double> &u, const std::vector<double> &old,
                   double interfaceFlux, double dt);

struct Heat1dRun {
  Heat1dSolution   solution; ///< this participant's half at the end time
  int              windows         = 0;
  int              totalIterations = 0;
  int              forcedWindows   = 0;
  std::vector<int> iterationsPerWindow;
};

/// Runs one half of the partitioned problem through `participant`. The
/// participant must be named "Dirichlet" or "Neumann" and provide
/// "Dirichlet-Mesh" / "Neumann-Mesh" with the single vertex x = 0.5. The
/// problem's dt and endTime are replaced by the coupling window settings.
Heat1dRun runPartitioned(Participant &participant, Heat1dSide side, Heat1dProblem problem);

void writeSolutionCsv(std::ostream &out, const Heat1dSolution &solution);
void writeSolutionCsv(const std::filesystem::path &path, const Heat1dSolution &solution);

} // namespace duet::harness
