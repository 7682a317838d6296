#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <future>
#include <random>
#include <regex>

#include "Oracles.hpp"
#include "Support.hpp"
#include "duet/Error.hpp"
#include "duet/api/Participant.hpp"
#include "duet/config/Config.hpp"
#include "duet/harness/Heat1d.hpp"
#include "duet/harness/MeshGenerators.hpp"

using namespace duet;
using test::runCli;
using test::runCliPair;

namespace {

std::string fx(const std::string &relative) { return test::fixture(relative).string(); }

double relativeL2(const std::string &out)
{
  std::smatch m;
  const std::regex re("relative-l2: ([^\\n]+)");
  if (!std::regex_search(out, m, re)) {
    ADD_FAILURE() << "no relative-l2 in\n" << out;
    return -1.0;
  }
  return std::stod(m[1]);
}

std::vector<std::pair<double, double>> readCsv(const std::filesystem::path &path)
{
  std::istringstream in(test::readFile(path));
  std::string        line;
  std::getline(in, line);
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    rows.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  return rows;
}

struct HeatPair {
  test::ProcessResult dirichlet, neumann;
  std::string         dirichletCsv, neumannCsv;
};

HeatPair runHeat(const std::string &config, bool dirichletFirst, const std::vector<std::string> &extra = {})
{
  test::TempDir dir;
  auto args = [&](const std::string &side) {
    std::vector<std::string> a{"heat1d", fx("heat1d/" + config + ".xml"), side,
                               "--exchange-directory", dir.path().string(),
                               "--output-directory", dir.path().string(),
                               "-o", (dir / (side + ".csv")).string()};
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  HeatPair r;
  if (dirichletFirst) {
    std::tie(r.dirichlet, r.neumann) = runCliPair(args("dirichlet"), args("neumann"));
  } else {
    std::tie(r.neumann, r.dirichlet) = runCliPair(args("neumann"), args("dirichlet"));
  }
  r.dirichletCsv = test::readFile(dir / "dirichlet.csv");
  r.neumannCsv   = test::readFile(dir / "neumann.csv");
  return r;
}

} // namespace

TEST(MappingTestCli, IsDeterministic)
{
  const std::vector<std::string> args{"mapping-test", "--mesh-a", "square:8", "--mesh-b", "square:11",
                                      "--mapping", "rbf-ctps", "--support-radius", "0.6"};
  const auto first  = runCli(args);
  const auto second = runCli(args);
  ASSERT_EQ(first.exitCode, 0) << first.err;
  EXPECT_EQ(first.out, second.out);
  EXPECT_GT(relativeL2(first.out), 0.0);
}

TEST(MappingTestCli, ProjectionBeatsNearestNeighbor)
{
  auto run = [](const std::string &method) {
    const auto r = runCli({"mapping-test", "--mesh-a", "square:8", "--mesh-b", "square:11", "--mapping", method});
    EXPECT_EQ(r.exitCode, 0) << r.err;
    return relativeL2(r.out);
  };
  const double nn = run("nn");
  const double np = run("np");
  EXPECT_LT(np, nn);
  EXPECT_GT(np, 0.0);
}

TEST(MappingTestCli, VerboseDumpAndErrors)
{
  const auto r = runCli({"mapping-test", "--mesh-a", "square:2", "--mesh-b", "square:1", "--verbose"});
  ASSERT_EQ(r.exitCode, 0);
  // the origin is shared, f(0) = 0.78 on both meshes
  EXPECT_NE(r.out.find("a 0 0 0 0 0.78\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("b 0 0 0 0 0.78 0.78\n"), std::string::npos);
  EXPECT_EQ(relativeL2(r.out), 0.0);

  EXPECT_EQ(runCli({"mapping-test", "--mesh-a", "square:x", "--mesh-b", "square:2"}).exitCode, 1);
  EXPECT_EQ(runCli({"mapping-test", "--mesh-a", "/nonexistent.vtk", "--mesh-b", "square:2"}).exitCode, 1);
  EXPECT_EQ(runCli({"mapping-test", "--mesh-a", "square:2"}).exitCode, 1);
  EXPECT_EQ(runCli({"no-such-command"}).exitCode, 1);
}

TEST(SolverDummyCli, SelfCouplingExitsZero)
{
  for (const std::string config : {"explicit", "implicit", "parallel-explicit", "parallel-implicit"}) {
    SCOPED_TRACE(config);
    test::TempDir dir;
    auto args = [&](const std::string &name) {
      return std::vector<std::string>{"solverdummy", fx("dummy/" + config + ".xml"), name, "--exchange-directory",
                                      dir.path().string()};
    };
    const auto [one, two] = runCliPair(args("SolverOne"), args("SolverTwo"));
    EXPECT_EQ(one.exitCode, 0) << one.err;
    EXPECT_EQ(two.exitCode, 0) << two.err;
    EXPECT_NE(one.out.find("SolverOne: finished windows=5"), std::string::npos) << one.out;
    EXPECT_NE(two.out.find("SolverTwo: finished windows=5"), std::string::npos) << two.out;
    for (const auto &entry : std::filesystem::recursive_directory_iterator(dir.path())) {
      EXPECT_TRUE(entry.is_directory()) << "leftover token " << entry.path();
    }
  }
}

TEST(SolverDummyCli, MismatchedConfigurationsFail)
{
  test::TempDir dir;
  const auto [one, two] = runCliPair(
      {"solverdummy", fx("dummy/explicit.xml"), "SolverOne", "--exchange-directory", dir.path().string()},
      {"solverdummy", fx("dummy/mismatched.xml"), "SolverTwo", "--exchange-directory", dir.path().string(),
       "--timeout", "5"});
  EXPECT_EQ(one.exitCode, 1);
  EXPECT_EQ(two.exitCode, 1);
  EXPECT_NE(one.err.find("configuration mismatch"), std::string::npos) << one.err;
}

TEST(SolverDummyCli, LonelyParticipantTimesOut)
{
  test::TempDir dir;
  const auto    r = runCli({"solverdummy", fx("dummy/explicit.xml"), "SolverTwo", "--exchange-directory",
                            dir.path().string(), "--timeout", "0.3"});
  EXPECT_EQ(r.exitCode, 1);
  EXPECT_NE(r.err.find("handshake timeout"), std::string::npos) << r.err;
  EXPECT_EQ(runCli({"solverdummy", fx("dummy/explicit.xml"), "Bogus"}).exitCode, 1);
}

TEST(Heat1dCli, LaunchOrderDoesNotMatter)
{
  const auto a = runHeat("serial-iqn-ils", true, {"--alpha-right", "2"});
  const auto b = runHeat("serial-iqn-ils", false, {"--alpha-right", "2"});
  ASSERT_EQ(a.dirichlet.exitCode, 0) << a.dirichlet.err;
  ASSERT_EQ(a.neumann.exitCode, 0) << a.neumann.err;
  ASSERT_EQ(b.dirichlet.exitCode, 0) << b.dirichlet.err;
  ASSERT_EQ(b.neumann.exitCode, 0) << b.neumann.err;
  EXPECT_FALSE(a.dirichletCsv.empty());
  EXPECT_EQ(a.dirichletCsv, b.dirichletCsv);
  EXPECT_EQ(a.neumannCsv, b.neumannCsv);
  EXPECT_EQ(a.dirichlet.out, b.dirichlet.out);
}

TEST(Heat1dCli, MatchesMonolithic)
{
  test::TempDir dir;
  const auto    mono = runCli({"heat1d-monolithic", "--alpha-right", "2", "-o", (dir / "mono.csv").string()});
  ASSERT_EQ(mono.exitCode, 0) << mono.err;
  const auto u = readCsv(dir / "mono.csv");
  ASSERT_EQ(u.size(), 99u);

  const auto pair = runHeat("serial-iqn-ils", true, {"--alpha-right", "2"});
  ASSERT_EQ(pair.dirichlet.exitCode, 0);
  test::writeFile(dir / "d.csv", pair.dirichletCsv);
  test::writeFile(dir / "n.csv", pair.neumannCsv);
  const auto left  = readCsv(dir / "d.csv");
  const auto right = readCsv(dir / "n.csv");
  ASSERT_EQ(left.size(), 50u);
  ASSERT_EQ(right.size(), 50u);
  double worst = 0.0;
  for (std::size_t i = 0; i < 50; ++i) {
    EXPECT_EQ(left[i].first, u[i].first);
    EXPECT_EQ(right[i].first, u[49 + i].first);
    worst = std::max({worst, std::abs(left[i].second - u[i].second), std::abs(right[i].second - u[49 + i].second)});
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Heat1dCli, WatchpointAndFailures)
{
  test::TempDir dir;
  auto          args = [&](const std::string &side) {
    return std::vector<std::string>{"heat1d", fx("heat1d/serial-iqn-ils.xml"), side, "--exchange-directory",
                                    dir.path().string(), "--output-directory", dir.path().string(), "-o",
                                    (dir / (side + ".csv")).string()};
  };
  const auto [d, n] = runCliPair(args("dirichlet"), args("neumann"));
  ASSERT_EQ(n.exitCode, 0) << n.err;
  std::istringstream csv(test::readFile(dir / "interface.csv"));
  std::string        line;
  std::getline(csv, line);
  EXPECT_EQ(line, "time,Temperature,Flux");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
  }
  EXPECT_EQ(rows, 20);
  EXPECT_EQ(runCli({"heat1d", fx("heat1d/serial-iqn-ils.xml"), "middle"}).exitCode, 1);
  EXPECT_EQ(runCli({"heat1d-monolithic", "--points", "1"}).exitCode, 1);
}

TEST(ConfigVizCli, PrintsDotAndValidates)
{
  const auto r = runCli({"config-viz", fx("config/fluid-solid.xml")});
  ASSERT_EQ(r.exitCode, 0) << r.err;
  EXPECT_EQ(r.out, test::readFile(test::fixture("golden/fluid-solid.dot")));
  EXPECT_EQ(r.err, "");

  const auto v = runCli({"config-viz", "--validate-only", fx("config/fluid-solid.xml")});
  EXPECT_EQ(v.exitCode, 0);
  EXPECT_EQ(v.out, "");

  const auto bad = runCli({"config-viz", "--validate-only", fx("config/invalid/duplicate-data.xml")});
  EXPECT_EQ(bad.exitCode, 1);
  EXPECT_EQ(bad.out, "");
  EXPECT_NE(bad.err.find("duplicate data name \"Force\""), std::string::npos) << bad.err;
  EXPECT_EQ(runCli({"config-viz", fx("config/invalid/duplicate-data.xml")}).out, "");
  EXPECT_EQ(runCli({"config-viz", "/nonexistent.xml"}).exitCode, 1);
}

TEST(Heat1dSolver, ThomasMatchesDenseSolve)
{
  std::mt19937_64 rng(7);
  for (int n : {1, 2, 3, 10, 57}) {
    auto a = test::randomVector(rng, n), c = test::randomVector(rng, n), d = test::randomVector(rng, n);
    Eigen::VectorXd b = test::randomVector(rng, n).array() + 4.0;
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      dense(i, i) = b[i];
      if (i > 0) {
        dense(i, i - 1) = a[i];
      }
      if (i + 1 < n) {
        dense(i, i + 1) = c[i];
      }
    }
    const Eigen::VectorXd expected = dense.partialPivLu().solve(d);
    const auto            got      = harness::solveTridiagonal(std::vector<double>(a.begin(), a.end()),
                                                               std::vector<double>(b.begin(), b.end()),
                                                               std::vector<double>(c.begin(), c.end()),
                                                               std::vector<double>(d.begin(), d.end()));
    ASSERT_EQ(got.size(), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(got[static_cast<std::size_t>(i)], expected[i], 1e-12);
    }
  }
  EXPECT_THROW(harness::solveTridiagonal({0, 1}, {1}, {0}, {1}), Error);
}

TEST(Heat1dSolver, MonolithicStepSolvesBackwardEuler)
{
  harness::Heat1dProblem p;
  p.pointsPerSide = 6;
  p.alphaRight    = 2.0;
  p.leftValue     = 0.3;
  p.rightValue    = -0.1;
  const auto u0   = harness::initialState(p).u;
  const auto u1   = harness::monolithicStep(p, u0);
  const int  n    = 2 * p.intervalsPerSide() + 1;
  ASSERT_EQ(u1.size(), static_cast<std::size_t>(n));
  EXPECT_EQ(u1.front(), 0.3);
  EXPECT_EQ(u1.back(), -0.1);
  const double h = p.spacing();
  const int    m = p.intervalsPerSide();
  for (int i = 1; i + 1 < n; ++i) {
    // flux form; the interface node owns two half cells
    const double aw  = i <= m ? p.alphaLeft : p.alphaRight;
    const double ae  = i < m ? p.alphaLeft : p.alphaRight;
    const double lhs = (u1[i] - u0[i]) / p.dt;
    const double rhs = (ae * (u1[i + 1] - u1[i]) - aw * (u1[i] - u1[i - 1])) / (h * h);
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(rhs))) << i;
  }
}

TEST(Heat1dSolver, SplitStepsAtTheExactInterfaceReproduceTheMonolith)
{
  harness::Heat1dProblem p;
  p.alphaRight = 3.0;
  const auto u0 = harness::initialState(p).u;
  const auto u1 = harness::monolithicStep(p, u0);
  const int  m  = p.intervalsPerSide();

  std::vector<double> left(u0.begin(), u0.begin() + m + 1), right(u0.begin() + m, u0.end());
  const auto          oldLeft = left, oldRight = right;
  const double        flux = harness::dirichletStep(p, left, oldLeft, u1[m], p.dt);
  const double        temp = harness::neumannStep(p, right, oldRight, flux, p.dt);
  EXPECT_NEAR(temp, u1[m], 1e-12);
  for (int i = 0; i <= m; ++i) {
    EXPECT_NEAR(left[i], u1[i], 1e-12);
    EXPECT_NEAR(right[i], u1[m + i], 1e-12);
  }
}

TEST(Heat1dSolver, InProcessPartitionedRunMatchesMonolith)
{
  for (const std::string name : {"serial-iqn-ils", "serial-aitken", "parallel-iqn-ils", "serial-iqn-imvj"}) {
    SCOPED_TRACE(name);
    const auto             cfg = config::parseFile(fx("heat1d/" + name + ".xml"));
    harness::Heat1dProblem problem;
    problem.alphaRight = 2.0;
    auto [a, b]        = com::makeLocalChannelPair();
    std::shared_ptr<com::Channel> ca(std::move(a)), cb(std::move(b));
    auto run = [&](harness::Heat1dSide side, std::shared_ptr<com::Channel> ch) {
      ParticipantOptions options;
      options.channel = ch;
      test::TempDir dir;
      options.outputDirectory = dir.path();
      Participant p(side == harness::Heat1dSide::Dirichlet ? "Dirichlet" : "Neumann", cfg, 0, 1, options);
      return harness::runPartitioned(p, side, problem);
    };
    auto       neumann   = std::async(std::launch::async, run, harness::Heat1dSide::Neumann, cb);
    const auto dirichlet = run(harness::Heat1dSide::Dirichlet, ca);
    const auto right     = neumann.get();
    EXPECT_EQ(dirichlet.windows, 20);
    EXPECT_EQ(dirichlet.forcedWindows, 0);
    EXPECT_EQ(dirichlet.totalIterations, right.totalIterations);

    problem.dt      = 0.01;
    problem.endTime = 0.2;
    const auto mono = harness::solveMonolithic(problem).u;
    const int  m    = problem.intervalsPerSide();
    for (int i = 0; i <= m; ++i) {
      EXPECT_NEAR(dirichlet.solution.u[i], mono[i], 1e-6);
      EXPECT_NEAR(right.solution.u[i], mono[m + i], 1e-6);
    }
  }
}
