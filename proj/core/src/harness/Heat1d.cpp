#include "duet/harness/Heat1d.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <numbers>

#include "duet/Error.hpp"
#include "duet/api/Participant.hpp"

namespace duet::harness {

int Heat1dProblem::steps() const
{
  const double n = endTime / dt;
  const double k = std::round(n);
  if (std::abs(n - k) > 1e-9 * std::max(1.0, n)) {
    throw Error(fmt::format("end time {} is not a multiple of dt {}", endTime, dt));
  }
  return static_cast<int>(k);
}

void Heat1dProblem::check() const
{
  if (pointsPerSide < 3) {
    throw Error(fmt::format("heat1d needs at least 3 points per side, got {}", pointsPerSide));
  }
  if (!(alphaLeft > 0.0) || !(alphaRight > 0.0)) {
    throw Error(fmt::format("diffusivities must be positive, got {} and {}", alphaLeft, alphaRight));
  }
  if (!(dt > 0.0) || !(endTime > 0.0)) {
    throw Error(fmt::format("dt and end time must be positive, got {} and {}", dt, endTime));
  }
  steps();
}

std::vector<double> solveTridiagonal(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                                     std::vector<double> d)
{
  const std::size_t n = b.size();
  if (a.size() != n || c.size() != n || d.size() != n || n == 0) {
    throw Error("tridiagonal system with inconsistent sizes");
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double m = a[i] / b[i - 1];
    b[i] -= m * c[i - 1];
    d[i] -= m * d[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = d[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] = (d[i] - c[i] * x[i + 1]) / b[i];
  }
  return x;
}

Heat1dSolution initialState(const Heat1dProblem &p)
{
  const int      n = 2 * p.intervalsPerSide();
  const double   h = p.spacing();
  Heat1dSolution s;
  for (int i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    s.x.push_back(x);
    if (i == 0) {
      s.u.push_back(p.leftValue);
    } else if (i == n) {
      s.u.push_back(p.rightValue);
    } else {
      s.u.push_back(p.initial == InitialCondition::Sine ? std::sin(std::numbers::pi * x) : p.uniformValue);
    }
  }
  return s;
}

namespace {

struct Rows {
  std::vector<double> a, b, c, d;

  void add(double lower, double diagonal, double upper, double rhs)
  {
    a.push_back(lower);
    b.push_back(diagonal);
    c.push_back(upper);
    d.push_back(rhs);
  }
};

/// Rows for interior nodes [first, last] with diffusivity alpha; known
/// neighbours outside the range are moved to the right-hand side by the caller.
void interior(Rows &rows, int first, int last, double alpha, const Heat1dProblem &p, const std::vector<double> &old,
              double dt, int offset)
{
  const double h = p.spacing();
  const double k = alpha / (h * h);
  for (int i = first; i <= last; ++i) {
    rows.add(-k, 1.0 / dt + 2.0 * k, -k, old[static_cast<std::size_t>(i - offset)] / dt);
  }
}

} // namespace

std::vector<double> monolithicStep(const Heat1dProblem &p, const std::vector<double> &u)
{
  const int    m = p.intervalsPerSide();
  const int    n = 2 * m;
  const double h = p.spacing();
  const double dt = p.dt;

  Rows rows;
  interior(rows, 1, m - 1, p.alphaLeft, p, u, dt, 0);
  rows.add(-p.alphaLeft / h, h / dt + (p.alphaLeft + p.alphaRight) / h, -p.alphaRight / h,
           h / dt * u[static_cast<std::size_t>(m)]);
  interior(rows, m + 1, n - 1, p.alphaRight, p, u, dt, 0);
  rows.d.front() += p.alphaLeft / (h * h) * p.leftValue;
  rows.d.back() += p.alphaRight / (h * h) * p.rightValue;

  const auto          inner = solveTridiagonal(rows.a, rows.b, rows.c, rows.d);
  std::vector<double> next(u.size());
  next.front() = p.leftValue;
  next.back()  = p.rightValue;
  std::copy(inner.begin(), inner.end(), next.begin() + 1);
  return next;
}

Heat1dSolution solveMonolithic(const Heat1dProblem &p)
{
  p.check();
  Heat1dSolution s     = initialState(p);
  const int      steps = p.steps();
  for (int k = 0; k < steps; ++k) {
    s.u = monolithicStep(p, s.u);
  }
  return s;
}

Heat1dSide heat1dSideFromString(std::string_view side)
{
  if (side == "dirichlet" || side == "Dirichlet") {
    return Heat1dSide::Dirichlet;
  }
  if (side == "neumann" || side == "Neumann") {
    return Heat1dSide::Neumann;
  }
  throw Error(fmt::format("unknown heat1d participant \"{}\" (expected dirichlet or neumann)", side));
}

double dirichletStep(const Heat1dProblem &p, std::vector<double> &u, const std::vector<double> &old,
                     double interfaceTemperature, double dt)
{
  const int    m = p.intervalsPerSide();
  const double h = p.spacing();

  Rows rows;
  interior(rows, 1, m - 1, p.alphaLeft, p, old, dt, 0);
  rows.d.front() += p.alphaLeft / (h * h) * p.leftValue;
  rows.d.back() += p.alphaLeft / (h * h) * interfaceTemperature;

  const auto inner = solveTridiagonal(rows.a, rows.b, rows.c, rows.d);
  u.front()        = p.leftValue;
  std::copy(inner.begin(), inner.end(), u.begin() + 1);
  u[static_cast<std::size_t>(m)] = interfaceTemperature;

  const double um = interfaceTemperature;
  return p.alphaLeft * (u[static_cast<std::size_t>(m - 1)] - um) / h -
         0.5 * h * (um - old[static_cast<std::size_t>(m)]) / dt;
}

double neumannStep(const Heat1dProblem &p, std::vector<double> &u, const std::vector<double> &old,
                   double interfaceFlux, double dt)
{
  const int    m = p.intervalsPerSide();
  const double h = p.spacing();

  // local index 0 is the interface node, m is the right boundary
  Rows rows;
  rows.add(0.0, 0.5 * h / dt + p.alphaRight / h, -p.alphaRight / h, 0.5 * h / dt * old[0] + interfaceFlux);
  interior(rows, 1, m - 1, p.alphaRight, p, old, dt, 0);
  rows.d.back() += p.alphaRight / (h * h) * p.rightValue;

  const auto inner = solveTridiagonal(rows.a, rows.b, rows.c, rows.d);
  std::copy(inner.begin(), inner.end(), u.begin());
  u.back() = p.rightValue;
  return u.front();
}

Heat1dRun runPartitioned(Participant &participant, Heat1dSide side, Heat1dProblem problem)
{
  const auto &scheme = participant.configuration().scheme;
  problem.dt         = scheme.windowSize;
  problem.endTime    = scheme.maxTime;
  problem.check();

  const bool  dirichlet = side == Heat1dSide::Dirichlet;
  const auto  meshName  = dirichlet ? std::string("Dirichlet-Mesh") : std::string("Neumann-Mesh");
  const auto  readName  = dirichlet ? "Temperature" : "Flux";
  const auto  writeName = dirichlet ? "Flux" : "Temperature";
  const int   m         = problem.intervalsPerSide();
  const auto  full      = initialState(problem);
  const auto  first     = dirichlet ? 0 : m;

  std::vector<double> coordinate(static_cast<std::size_t>(participant.dimensions()), 0.0);
  coordinate[0]  = 0.5;
  const auto ids = participant.setMeshVertices(meshName, coordinate);

  Heat1dSolution state;
  state.x.assign(full.x.begin() + first, full.x.begin() + first + m + 1);
  state.u.assign(full.u.begin() + first, full.u.begin() + first + m + 1);
  std::vector<double> old        = state.u;
  std::vector<double> checkpoint = state.u;

  participant.initialize();

  Heat1dRun run;
  int       before = participant.totalIterations();
  while (participant.isCouplingOngoing()) {
    if (participant.isActionRequired(ActionFlag::WriteIterationCheckpoint)) {
      checkpoint = old;
      participant.markActionFulfilled(ActionFlag::WriteIterationCheckpoint);
    }
    double input = 0.0;
    participant.readData(meshName, readName, ids, std::span<double>(&input, 1));
    const double output = dirichlet ? dirichletStep(problem, state.u, old, input, problem.dt)
                                    : neumannStep(problem, state.u, old, input, problem.dt);
    participant.writeData(meshName, writeName, ids, std::span<const double>(&output, 1));
    const int windows = participant.completedWindows();
    participant.advance(problem.dt);
    if (participant.isActionRequired(ActionFlag::ReadIterationCheckpoint)) {
      old = checkpoint;
      participant.markActionFulfilled(ActionFlag::ReadIterationCheckpoint);
    } else if (participant.completedWindows() > windows) {
      old = state.u;
      run.iterationsPerWindow.push_back(participant.totalIterations() - before);
      before = participant.totalIterations();
    }
  }
  run.solution        = state;
  run.windows         = participant.completedWindows();
  run.totalIterations = participant.totalIterations();
  run.forcedWindows   = participant.forcedWindows();
  participant.finalize();
  return run;
}

void writeSolutionCsv(std::ostream &out, const Heat1dSolution &solution)
{
  out << "x,u\n";
  for (std::size_t i = 0; i < solution.x.size(); ++i) {
    fmt::print(out, "{:.17g},{:.17g}\n", solution.x[i], solution.u[i]);
  }
}

void writeSolutionCsv(const std::filesystem::path &path, const Heat1dSolution &solution)
{
  std::ofstream out(path);
  if (!out) {
    throw Error(fmt::format("cannot write \"{}\"", path.string()));
  }
  writeSolutionCsv(out, solution);
}

} // namespace duet::harness
