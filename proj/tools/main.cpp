#include <CLI11.hpp>
#include <charconv>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <fmt/ostream.h>
#include <iostream>

#include "duet/Error.hpp"
#include "duet/api/Participant.hpp"
#include "duet/config/Config.hpp"
#include "duet/harness/Heat1d.hpp"
#include "duet/harness/MappingTest.hpp"
#include "duet/harness/MeshGenerators.hpp"
#include "duet/harness/SolverDummy.hpp"
#include "duet/mesh/MeshIO.hpp"

namespace {

using namespace duet;

// "square:N" generates the structured unit square, anything else is a mesh file.
mesh::Mesh loadMesh(const std::string &spec, const std::string &name)
{
  if (spec.rfind("square:", 0) == 0) {
    int         cells = 0;
    const auto *begin = spec.data() + 7;
    const auto *end   = spec.data() + spec.size();
    auto [ptr, ec]    = std::from_chars(begin, end, cells);
    if (ec != std::errc() || ptr != end) {
      throw Error(fmt::format("bad mesh \"{}\": expected square:<cells>", spec));
    }
    return harness::unitSquare(name, cells);
  }
  return mesh::readMeshFile(spec, name);
}

struct HeatFlags {
  harness::Heat1dProblem problem;
  std::string            initial = "sine";
  std::string            output;

  void add(CLI::App *app)
  {
    app->add_option("--points", problem.pointsPerSide, "grid points per side, interface included")
        ->capture_default_str();
    app->add_option("--alpha-left", problem.alphaLeft, "diffusivity on [0,0.5]")->capture_default_str();
    app->add_option("--alpha-right", problem.alphaRight, "diffusivity on [0.5,1]")->capture_default_str();
    app->add_option("--initial", initial, "initial condition")
        ->check(CLI::IsMember({"sine", "uniform"}))
        ->capture_default_str();
    app->add_option("--uniform-value", problem.uniformValue, "value for --initial uniform")->capture_default_str();
    app->add_option("--left", problem.leftValue, "u(0,t)")->capture_default_str();
    app->add_option("--right", problem.rightValue, "u(1,t)")->capture_default_str();
    app->add_option("-o,--output", output, "CSV file for u(x,T_end)");
  }

  harness::Heat1dProblem resolved()
  {
    problem.initial = initial == "uniform" ? harness::InitialCondition::Uniform : harness::InitialCondition::Sine;
    return problem;
  }
};

int mappingTest(const std::string &a, const std::string &b, harness::MappingTestOptions options,
                const std::string &constraint, const std::string &polynomial, bool verbose)
{
  options.constraint = constraint == "conservative" ? mapping::Constraint::Conservative : mapping::Constraint::Consistent;
  if (polynomial == "integrated") {
    options.polynomial = mapping::Polynomial::Integrated;
  } else if (polynomial == "off") {
    options.polynomial = mapping::Polynomial::None;
  }
  const auto meshA  = loadMesh(a, "A");
  const auto meshB  = loadMesh(b, "B");
  const auto result = harness::runMappingTest(meshA, meshB, options);
  harness::printMappingReport(std::cout, meshA, meshB, options, result, verbose);
  return 0;
}

int configViz(const std::string &path, bool validateOnly)
{
  const auto config      = config::parseFile(path);
  const auto diagnostics = config::validate(config);
  for (const auto &d : diagnostics) {
    std::cerr << config::toString(d) << '\n';
  }
  if (config::hasErrors(diagnostics)) {
    return 1;
  }
  if (!validateOnly) {
    std::cout << config::toDot(config);
  }
  return 0;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"duet: partitioned coupling tools"};
  app.require_subcommand(1);

  auto       *mt = app.add_subcommand("mapping-test", "map a test function from mesh A to mesh B and report the error");
  std::string meshA;
  std::string meshB;
  harness::MappingTestOptions mapOptions;
  std::string                 constraint = "consistent";
  std::string                 polynomial = "separated";
  bool                        verbose    = false;
  mt->add_option("--mesh-a", meshA, "input mesh file or square:<cells>")->required();
  mt->add_option("--mesh-b", meshB, "output mesh file or square:<cells>")->required();
  mt->add_option("--mapping", mapOptions.mapping, "mapping method")
      ->check(CLI::IsMember({"nn", "np", "rbf-gaussian", "rbf-tps", "rbf-ctps"}))
      ->capture_default_str();
  mt->add_option("--constraint", constraint, "mapping constraint")
      ->check(CLI::IsMember({"consistent", "conservative"}))
      ->capture_default_str();
  mt->add_option("--support-radius", mapOptions.supportRadius, "support radius for rbf-gaussian and rbf-ctps");
  mt->add_option("--polynomial", polynomial, "polynomial term of rbf mappings")
      ->check(CLI::IsMember({"separated", "integrated", "off"}))
      ->capture_default_str();
  mt->add_option("--function", mapOptions.function, "cosine, constant:c or affine:c,gx,gy[,gz]")->capture_default_str();
  mt->add_flag("--verbose", verbose, "dump per-vertex values");

  auto       *sd = app.add_subcommand("solverdummy", "pass-through participant");
  std::string sdConfig;
  std::string sdName;
  int         sdVertices = 3;
  std::string exchangeDirectory;
  double      timeout = 30.0;
  sd->add_option("config", sdConfig, "configuration file")->required()->check(CLI::ExistingFile);
  sd->add_option("participant", sdName, "participant name")->required();
  sd->add_option("--vertices", sdVertices, "vertices per provided mesh")->capture_default_str();
  sd->add_option("--exchange-directory", exchangeDirectory, "override the m2n exchange directory");
  sd->add_option("--timeout", timeout, "handshake timeout in seconds")->capture_default_str();

  auto       *heat = app.add_subcommand("heat1d", "one half of the partitioned 1D heat problem");
  std::string heatConfig;
  std::string heatSide;
  std::string outputDirectory = ".";
  HeatFlags   heatFlags;
  heat->add_option("config", heatConfig, "configuration file")->required()->check(CLI::ExistingFile);
  heat->add_option("participant", heatSide, "dirichlet or neumann")->required();
  heat->add_option("--exchange-directory", exchangeDirectory, "override the m2n exchange directory");
  heat->add_option("--output-directory", outputDirectory, "directory for watch-point files")->capture_default_str();
  heat->add_option("--timeout", timeout, "handshake timeout in seconds")->capture_default_str();
  heatFlags.add(heat);

  auto     *mono = app.add_subcommand("heat1d-monolithic", "unsplit 1D heat problem");
  HeatFlags monoFlags;
  monoFlags.add(mono);
  mono->add_option("--dt", monoFlags.problem.dt, "time step")->capture_default_str();
  mono->add_option("--t-end", monoFlags.problem.endTime, "end time")->capture_default_str();

  auto       *viz = app.add_subcommand("config-viz", "print the configuration as graphviz dot");
  std::string vizConfig;
  bool        validateOnly = false;
  viz->add_option("config", vizConfig, "configuration file")->required()->check(CLI::ExistingFile);
  viz->add_flag("--validate-only", validateOnly, "print diagnostics only");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*mt) {
      return mappingTest(meshA, meshB, mapOptions, constraint, polynomial, verbose);
    }
    if (*viz) {
      return configViz(vizConfig, validateOnly);
    }
    if (*mono) {
      const auto solution = harness::solveMonolithic(monoFlags.resolved());
      if (monoFlags.output.empty()) {
        harness::writeSolutionCsv(std::cout, solution);
      } else {
        harness::writeSolutionCsv(monoFlags.output, solution);
      }
      return 0;
    }

    ParticipantOptions options;
    options.handshakeTimeout  = std::chrono::milliseconds(static_cast<long>(timeout * 1000.0));
    options.exchangeDirectory = exchangeDirectory;

    if (*sd) {
      Participant participant(sdName, std::filesystem::path(sdConfig), 0, 1, options);
      const auto  run = harness::runSolverDummy(participant, sdVertices, &std::cout);
      fmt::print("{}: finished windows={} iterations={}\n", sdName, run.windows, run.totalIterations);
      return 0;
    }
    if (*heat) {
      const auto side = harness::heat1dSideFromString(heatSide);
      const auto name = side == harness::Heat1dSide::Dirichlet ? "Dirichlet" : "Neumann";
      options.outputDirectory = outputDirectory;
      Participant participant(name, std::filesystem::path(heatConfig), 0, 1, options);
      const auto  run = harness::runPartitioned(participant, side, heatFlags.resolved());
      const auto  out = heatFlags.output.empty() ? fmt::format("{}.csv", heatSide) : heatFlags.output;
      harness::writeSolutionCsv(out, run.solution);
      fmt::print("{}: windows={} iterations={}\n", name, run.windows, run.totalIterations);
      fmt::print("{}: iterations per window:{}\n", name, fmt::join(run.iterationsPerWindow, " "));
      if (run.forcedWindows > 0) {
        fmt::print(std::cerr, "error: max-iterations reached in {} of {} windows\n", run.forcedWindows, run.windows);
        return 1;
      }
      return 0;
    }
  } catch (const std::exception &e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return 1;
  }
  return 1;
}
