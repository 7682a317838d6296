#include <Eigen/Dense>
#include <chrono>
#include <fmt/format.h>
#include <fstream>
#include <future>
#include <random>
#include <regex>

#include "IllegalCalls.hpp"
#include "Oracles.hpp"
#include "Support.hpp"
#include "duet/Error.hpp"
#include "duet/acceleration/Acceleration.hpp"
#include "duet/acceleration/Accelerator.hpp"
#include "duet/com/ConnectionMap.hpp"
#include "duet/com/Frame.hpp"
#include "duet/com/SocketChannel.hpp"
#include "duet/com/Token.hpp"
#include "duet/config/Config.hpp"
#include "duet/harness/MeshGenerators.hpp"
#include "duet/harness/TestFunctions.hpp"
#include "duet/mapping/MappingOperator.hpp"

using namespace duet;
using namespace std::chrono_literals;
using Clock = std::chrono::steady_clock;

namespace {

/// Collects the first few reasons a criterion failed.
struct Verdict {
  std::vector<std::string> problems;
  std::string              summary;

  template <typename... Args>
  void fail(fmt::format_string<Args...> f, Args &&...args)
  {
    problems.push_back(fmt::format(f, std::forward<Args>(args)...));
  }
  void check(bool ok, const std::string &what)
  {
    if (!ok) {
      problems.push_back(what);
    }
  }
};

double seconds(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

std::vector<mapping::RadialBasis> allBases(double radius)
{
  return {mapping::RadialBasis::gaussian(radius), mapping::RadialBasis::thinPlateSplines(),
          mapping::RadialBasis::compactThinPlateSplinesC2(radius)};
}

// 1 --------------------------------------------------------------------------

mesh::Mesh randomMesh(const std::string &name, int dims, bool structured, std::mt19937_64 &rng)
{
  if (structured) {
    const int cells = 3 + static_cast<int>(rng() % 11); // at most 196 vertices
    return harness::perturbedSquare(name, cells, 0.3, rng(), dims);
  }
  return harness::randomCloud(name, 20 + static_cast<int>(rng() % 181), dims, rng());
}

void mappingInvariants(Verdict &v)
{
  std::mt19937_64 rng(101);
  int             operators = 0;
  double          worstOnes = 0, worstSum = 0, worstAdjoint = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int  dims = 2 + trial % 2;
    const auto a    = randomMesh("A", dims, trial % 3 == 0, rng);
    const auto b    = randomMesh("B", dims, trial % 5 == 0, rng);
    // every operator below interpolates from the centers on A
    const double spacing = std::pow(1.0 / static_cast<double>(a.vertexCount()), 1.0 / dims);
    using Build = std::function<mapping::MappingOperator(const mesh::Mesh &, const mesh::Mesh &, mapping::Constraint)>;
    std::vector<std::pair<std::string, Build>> builders{{"nn", mapping::buildNearestNeighbor},
                                                        {"np", mapping::buildNearestProjection}};
    for (const auto &basis : allBases(3.0 * spacing)) {
      for (auto poly : {mapping::Polynomial::Integrated, mapping::Polynomial::Separated}) {
        builders.emplace_back(std::string(basis.name()),
                              [basis, poly](const mesh::Mesh &i, const mesh::Mesh &o, mapping::Constraint c) {
                                return mapping::buildRadialBasis(i, o, c, basis, poly);
                              });
      }
    }
    for (const auto &[name, build] : builders) {
      const auto consistent   = build(a, b, mapping::Constraint::Consistent);
      const auto conservative = build(b, a, mapping::Constraint::Conservative);
      const auto forward      = build(a, b, mapping::Constraint::Conservative);
      operators += 3;

      const Eigen::VectorXd ones = consistent.apply(Eigen::VectorXd::Ones(consistent.inputSize()));
      worstOnes                  = std::max(worstOnes, (ones.array() - 1.0).abs().maxCoeff());

      const auto   u   = test::randomVector(rng, forward.inputSize(), 0.0, 1.0);
      const double sum = forward.apply(u).sum();
      worstSum         = std::max(worstSum, std::abs(sum - u.sum()) / std::abs(u.sum()));

      const auto   x   = test::randomVector(rng, consistent.inputSize());
      const auto   y   = test::randomVector(rng, consistent.outputSize());
      const double lhs = consistent.apply(x).dot(y);
      const double rhs = x.dot(conservative.apply(y));
      worstAdjoint     = std::max(worstAdjoint, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
  }
  v.check(worstOnes <= 1e-9, fmt::format("ones-field error {:.3g}", worstOnes));
  v.check(worstSum <= 1e-8, fmt::format("sum error {:.3g}", worstSum));
  v.check(worstAdjoint <= 1e-10, fmt::format("adjoint error {:.3g}", worstAdjoint));
  v.summary = fmt::format("{} operators, ones {:.1e}, sum {:.1e}, adjoint {:.1e}", operators, worstOnes, worstSum,
                          worstAdjoint);
}

// 2 --------------------------------------------------------------------------

void linearReproduction(Verdict &v)
{
  std::mt19937_64                        rng(202);
  std::uniform_real_distribution<double> coefficient(-2.0, 2.0);
  double                                 worst = 0;
  int                                    runs  = 0;
  for (int dims : {2, 3}) {
    const auto a = harness::randomCloud("A", 120, dims, 11 + dims);
    const auto b = harness::randomCloud("B", 90, dims, 21 + dims);
    for (const auto &basis : allBases(0.5)) {
      for (auto poly : {mapping::Polynomial::Integrated, mapping::Polynomial::Separated}) {
        const auto op = mapping::buildRadialBasis(a, b, mapping::Constraint::Consistent, basis, poly);
        for (int k = 0; k < 10; ++k) {
          harness::AffineFunction f;
          f.constant = coefficient(rng);
          f.gradient = mesh::Vector3(coefficient(rng), coefficient(rng), dims == 3 ? coefficient(rng) : 0.0);
          Eigen::VectorXd in(a.vertexCount()), exact(b.vertexCount());
          for (int i = 0; i < in.size(); ++i) {
            in[i] = f(a.vertex(i));
          }
          for (int i = 0; i < exact.size(); ++i) {
            exact[i] = f(b.vertex(i));
          }
          worst = std::max(worst, (op.apply(in) - exact).norm() / exact.norm());
          ++runs;
        }
      }
    }
  }
  v.check(worst < 1e-8, fmt::format("relative l2 error {:.3g}", worst));
  v.summary = fmt::format("{} mappings of affine fields, worst relative l2 {:.1e}", runs, worst);
}

// 3 --------------------------------------------------------------------------

double fittedOrder(const std::vector<double> &h, const std::vector<double> &e)
{
  const auto n = static_cast<double>(h.size());
  double     sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void convergenceOrders(Verdict &v)
{
  const auto                target = harness::unitSquare("B", 50);
  const mapping::TestFunction f    = harness::cosineFunction;
  std::vector<double>       h, nn, np, ctps;
  for (int cells : {8, 16, 32, 64}) {
    const auto source = harness::unitSquare("A", cells);
    h.push_back(1.0 / cells);
    nn.push_back(mapping::mappingError(
        source, target, mapping::buildNearestNeighbor(source, target, mapping::Constraint::Consistent), f));
    np.push_back(mapping::mappingError(
        source, target, mapping::buildNearestProjection(source, target, mapping::Constraint::Consistent), f));
    const auto basis = mapping::RadialBasis::compactThinPlateSplinesC2(5.0 * h.back());
    ctps.push_back(mapping::mappingError(
        source, target,
        mapping::buildRadialBasis(source, target, mapping::Constraint::Consistent, basis,
                                  mapping::Polynomial::Separated),
        f));
    if (!(ctps.back() < np.back())) {
      v.fail("rbf-ctps {:.3g} not below np {:.3g} at h=1/{}", ctps.back(), np.back(), cells);
    }
  }
  const double orderNn = fittedOrder(h, nn), orderNp = fittedOrder(h, np);
  v.check(orderNn >= 0.8 && orderNn <= 1.2, fmt::format("nn order {:.3f}", orderNn));
  v.check(orderNp >= 1.7 && orderNp <= 2.3, fmt::format("np order {:.3f}", orderNp));
  v.summary = fmt::format("order nn {:.2f}, np {:.2f}; at h=1/64 nn {:.2e}, np {:.2e}, rbf-ctps {:.2e}", orderNn,
                          orderNp, nn.back(), np.back(), ctps.back());
}

// 4, 5 -----------------------------------------------------------------------

void quasiNewton(Verdict &v)
{
  std::mt19937_64 rng(404);
  int             worstExcess = -100;
  double          worstSecant = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    Eigen::MatrixXd A = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return std::normal_distribution<double>()(rng); });
    A *= 0.9 / A.jacobiSvd().singularValues()[0];
    const Eigen::VectorXd b = test::randomVector(rng, n);

    acceleration::AccelerationState state({n});
    state.initialRelaxation = 0.5;
    state.maxColumns        = 100;
    Eigen::VectorXd x       = Eigen::VectorXd::Zero(n);
    int             evaluations = 0;
    bool            converged   = false;
    while (evaluations < 50) {
      const Eigen::VectorXd xTilde = A * x + b;
      ++evaluations;
      if ((xTilde - x).norm() < 1e-10) {
        converged = true;
        break;
      }
      x = acceleration::iqnUpdate(state, x, xTilde, acceleration::QuasiNewton::Ils, 1e-6);
      if (state.columns() > 0) {
        const Eigen::MatrixXd J = acceleration::secantInverseJacobian(state, false);
        worstSecant = std::max(worstSecant, (J * state.residualMatrix() - state.valueMatrix()).norm());
      }
    }
    if (!converged || evaluations > n + 2) {
      v.fail("n={} needed {} evaluations", n, evaluations);
    }
    worstExcess = std::max(worstExcess, evaluations - static_cast<int>(n));
  }
  v.check(worstSecant < 1e-10, fmt::format("||JV - W|| = {:.3g}", worstSecant));
  v.summary = fmt::format("20 contractions, at most n{:+d} evaluations, ||JV - W||_F <= {:.1e}", worstExcess,
                          worstSecant);
}

void aitkenExactness(Verdict &v)
{
  std::mt19937_64                        rng(505);
  std::uniform_real_distribution<double> ua(-0.99, 0.99), ub(-10.0, 10.0);
  double                                 worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double a = ua(rng), b = ub(rng);
    acceleration::AccelerationConfig config;
    config.method            = acceleration::Method::Aitken;
    config.initialRelaxation = 0.5;
    acceleration::Accelerator acc(config, {1});
    Eigen::VectorXd           x = Eigen::VectorXd::Zero(1);
    for (int k = 0; k < 2; ++k) {
      x = acc.accelerate(x, Eigen::VectorXd::Constant(1, a * x[0] + b));
    }
    const double exact = b / (1.0 - a);
    worst              = std::max(worst, std::abs(x[0] - exact) / std::max(1.0, std::abs(exact)));
  }
  v.check(worst <= 1e-12, fmt::format("error {:.3g}", worst));
  v.summary = fmt::format("100 maps, worst error relative to max(1, |x*|) {:.1e}", worst);
}

// 6, 7 -----------------------------------------------------------------------

struct HeatResult {
  bool                ok = false;
  std::string         error;
  int                 iterations = 0;
  std::vector<double> u;
};

std::vector<double> csvColumn(const std::string &text)
{
  std::istringstream in(text);
  std::string        line;
  std::getline(in, line);
  std::vector<double> values;
  while (std::getline(in, line)) {
    values.push_back(std::stod(line.substr(line.find(',') + 1)));
  }
  return values;
}

const std::vector<std::string> kHeatParameters{"--alpha-right", "2"};

HeatResult runHeat(const std::string &fixture)
{
  test::TempDir dir;
  auto          args = [&](const std::string &side) {
    std::vector<std::string> a{"heat1d",
                               test::fixture("heat1d/" + fixture + ".xml").string(),
                               side,
                               "--exchange-directory",
                               dir.path().string(),
                               "--output-directory",
                               dir.path().string(),
                               "-o",
                               (dir / (side + ".csv")).string()};
    a.insert(a.end(), kHeatParameters.begin(), kHeatParameters.end());
    return a;
  };
  const auto [d, n] = test::runCliPair(args("dirichlet"), args("neumann"));
  HeatResult r;
  if (d.exitCode != 0 || n.exitCode != 0) {
    r.error = fmt::format("{} exited {}/{}: {}{}", fixture, d.exitCode, n.exitCode, d.err, n.err);
    return r;
  }
  std::smatch m;
  if (!std::regex_search(d.out, m, std::regex("iterations=([0-9]+)"))) {
    r.error = "no iteration count in output";
    return r;
  }
  r.iterations = std::stoi(m[1]);
  r.u          = csvColumn(test::readFile(dir / "dirichlet.csv"));
  const auto right = csvColumn(test::readFile(dir / "neumann.csv"));
  if (r.u.empty() || right.empty()) {
    r.error = "empty solution";
    return r;
  }
  r.u.insert(r.u.end(), right.begin() + 1, right.end());
  r.ok = true;
  return r;
}

void heatVsMonolithic(Verdict &v)
{
  std::vector<std::string> args{"heat1d-monolithic"};
  args.insert(args.end(), kHeatParameters.begin(), kHeatParameters.end());
  const auto mono = test::runCli(args);
  if (mono.exitCode != 0) {
    v.fail("monolithic run failed: {}", mono.err);
    return;
  }
  const auto  reference = csvColumn(mono.out);
  std::string report;
  for (const std::string fixture : {"serial-iqn-ils", "serial-aitken", "parallel-iqn-ils"}) {
    const auto start = Clock::now();
    const auto run   = runHeat(fixture);
    const auto wall  = seconds(start);
    if (!run.ok) {
      v.fail("{}", run.error);
      continue;
    }
    if (run.u.size() != reference.size()) {
      v.fail("{}: {} values, monolithic has {}", fixture, run.u.size(), reference.size());
      continue;
    }
    double worst = 0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
      worst = std::max(worst, std::abs(run.u[i] - reference[i]));
    }
    v.check(worst < 1e-6, fmt::format("{}: max difference {:.3g}", fixture, worst));
    v.check(wall < 20.0, fmt::format("{}: {:.1f} s wall", fixture, wall));
    report += fmt::format("{}{} {:.1e} ({} it)", report.empty() ? "" : ", ", fixture, worst, run.iterations);
  }
  v.summary = "max|partitioned - monolithic|: " + report;
}

void iterationOrdering(Verdict &v)
{
  const auto iqn      = runHeat("serial-iqn-ils-1e-8");
  const auto aitken   = runHeat("serial-aitken-1e-8");
  const auto constant = runHeat("serial-constant-1e-8");
  for (const auto *r : {&iqn, &aitken, &constant}) {
    if (!r->ok) {
      v.fail("{}", r->error);
      return;
    }
  }
  v.check(iqn.iterations <= aitken.iterations, "iqn-ils needs more iterations than aitken");
  v.check(aitken.iterations <= constant.iterations, "aitken needs more iterations than constant relaxation");
  v.summary = fmt::format("iterations iqn-ils {} <= aitken {} <= constant {}", iqn.iterations, aitken.iterations,
                          constant.iterations);
}

// 8 --------------------------------------------------------------------------

com::Frame randomFrame(std::mt19937_64 &rng)
{
  std::uniform_int_distribution<int>     small(0, 20), letter(32, 126);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  auto name = [&] {
    std::string s(static_cast<std::size_t>(small(rng) % 12), ' ');
    for (auto &c : s) {
      c = static_cast<char>(letter(rng));
    }
    return s;
  };
  switch (rng() % 4) {
  case 0: {
    const int  dims = 2 + small(rng) % 2;
    mesh::Mesh m(name(), dims);
    const int  n = small(rng);
    for (int i = 0; i < n; ++i) {
      m.addVertex(mesh::Vector3(u(rng), u(rng), dims == 3 ? u(rng) : 0.0));
    }
    for (int i = 0; i + 2 < n; i += 3) {
      m.addTriangle(i, i + 1, i + 2);
    }
    return com::makeMeshFrame(m);
  }
  case 1: {
    com::FieldData f;
    f.data       = name();
    f.mesh       = name();
    f.components = static_cast<std::uint32_t>(1 + small(rng) % 3);
    f.values     = Eigen::VectorXd::NullaryExpr(small(rng) * f.components, [&] { return u(rng); });
    return com::makeFieldFrame(f);
  }
  case 2:
    return com::makeControlFrame({static_cast<com::ControlAction>(small(rng) % 3),
                                  static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng()), name()});
  default:
    return com::makeShutdownFrame(name());
  }
}

com::ConnectionSettings socketSettings(const std::filesystem::path &dir, bool acceptor)
{
  com::ConnectionSettings s;
  s.local             = acceptor ? "Solid" : "Fluid";
  s.remote            = acceptor ? "Fluid" : "Solid";
  s.acceptor          = acceptor;
  s.exchangeDirectory = dir;
  s.timeout           = 5s;
  return s;
}

void protocol(Verdict &v)
{
  std::mt19937_64 rng(808);
  int             codecFailures = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto frame = randomFrame(rng);
    const auto bytes = com::encodeFrame(frame);
    codecFailures += com::decodeFrame(bytes) != frame;
  }
  v.check(codecFailures == 0, fmt::format("{} codec round-trip failures", codecFailures));

  test::TempDir dir;
  const auto    start    = Clock::now();
  auto          acceptor = std::async(std::launch::async, [&] { return com::SocketChannel::connect(socketSettings(dir.path(), true)); });
  auto          requester = com::SocketChannel::connect(socketSettings(dir.path(), false));
  auto          accepted  = acceptor.get();
  const double  handshake = seconds(start);
  v.check(handshake < 1.0, fmt::format("handshake took {:.3f} s", handshake));

  // interleaved traffic in both directions, each channel driven by one thread
  std::vector<com::Frame> sequence;
  for (int i = 0; i < 1000; ++i) {
    sequence.push_back(randomFrame(rng));
  }
  auto exchange = [&](com::SocketChannel &channel, bool first) {
    int misordered = 0;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
      if (first) {
        channel.send(sequence[i]);
        misordered += channel.receive() != sequence[sequence.size() - 1 - i];
      } else {
        misordered += channel.receive() != sequence[i];
        channel.send(sequence[sequence.size() - 1 - i]);
      }
    }
    return misordered;
  };
  auto       other      = std::async(std::launch::async, exchange, std::ref(*accepted), false);
  const int  misordered = exchange(*requester, true) + other.get();
  v.check(misordered == 0, fmt::format("{} frames out of order", misordered));

  const std::vector<std::vector<int>>   a{{0, 1}, {2, 3}, {4, 5}};
  const std::vector<std::vector<int>>   b{{0, 1}, {2, 3}};
  const std::map<int, std::vector<int>> stencil{{0, {0}}, {1, {1, 2}}, {2, {3, 4}}, {3, {5}}};
  v.check(com::connectionMap(a, b, stencil) == com::ConnectionMap{{0, 0}, {1, 0}, {1, 1}, {2, 1}},
          "3x2 example differs");

  std::uniform_real_distribution<double> u(0.0, 1.0);
  int                                    mapMismatches = 0, boxMisses = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int ranksA = 1 + static_cast<int>(rng() % 5), ranksB = 1 + static_cast<int>(rng() % 5);
    std::vector<mesh::Vector3> xa(40), xb(25);
    for (auto *xs : {&xa, &xb}) {
      for (auto &x : *xs) {
        x = mesh::Vector3(u(rng), u(rng), trial % 2 ? u(rng) : 0.0);
      }
    }
    std::vector<int>                        ownerA(xa.size()), ownerB(xb.size());
    std::vector<std::vector<int>>           idsA(ranksA), idsB(ranksB);
    std::vector<std::vector<mesh::Vector3>> posA(ranksA), posB(ranksB);
    for (std::size_t i = 0; i < xa.size(); ++i) {
      ownerA[i] = std::min(ranksA - 1, static_cast<int>(xa[i].y() * ranksA));
      idsA[ownerA[i]].push_back(static_cast<int>(i));
      posA[ownerA[i]].push_back(xa[i]);
    }
    for (std::size_t j = 0; j < xb.size(); ++j) {
      ownerB[j] = std::min(ranksB - 1, static_cast<int>(xb[j].y() * ranksB));
      idsB[ownerB[j]].push_back(static_cast<int>(j));
      posB[ownerB[j]].push_back(xb[j]);
    }
    const double                    radius = 0.05 + 0.25 * u(rng);
    std::map<int, std::vector<int>> stencils;
    com::ConnectionMap              oracle;
    for (std::size_t j = 0; j < xb.size(); ++j) {
      for (std::size_t i = 0; i < xa.size(); ++i) {
        if ((xa[i] - xb[j]).norm() <= radius) {
          stencils[static_cast<int>(j)].push_back(static_cast<int>(i));
          oracle.insert({ownerA[i], ownerB[j]});
        }
      }
    }
    const auto map = com::connectionMap(idsA, idsB, stencils);
    mapMismatches += map != oracle;
    const auto boxes = com::bboxCandidates(posA, posB, radius);
    for (const auto &pair : map) {
      boxMisses += boxes.count(pair) == 0;
    }
  }
  v.check(mapMismatches == 0, fmt::format("{} connection maps differ from brute force", mapMismatches));
  v.check(boxMisses == 0, fmt::format("{} rank pairs missing from the box candidates", boxMisses));
  v.summary = fmt::format("10^4 frames, handshake {:.0f} ms, 2x1000 frames in order, 100 connection maps", handshake * 1e3);
}

// 9 --------------------------------------------------------------------------

void configSuite(Verdict &v)
{
  const auto fluidSolid = test::fixture("config/fluid-solid.xml").string();
  try {
    const auto config      = config::parseFile(fluidSolid);
    const auto diagnostics = config::validate(config);
    v.check(!config::hasErrors(diagnostics), "fluid-solid fixture has errors");
    const auto text = config::toXml(config);
    v.check(config::parse(text) == config && config::toXml(config::parse(text)) == text, "round trip differs");
  } catch (const std::exception &e) {
    v.fail("fluid-solid fixture: {}", e.what());
  }

  std::ifstream in(test::fixture("config/invalid/expected.txt"));
  std::string   line;
  int           cases = 0;
  while (std::getline(in, line)) {
    const auto bar  = line.find('|');
    const auto file = test::fixture("config/invalid/" + line.substr(0, bar)).string();
    const auto r    = test::runCli({"config-viz", "--validate-only", file});
    if (r.exitCode != 1 || r.err.find(line.substr(bar + 1)) == std::string::npos) {
      v.fail("{}: exit {}, {}", line.substr(0, bar), r.exitCode, r.err);
    }
    ++cases;
  }
  v.check(cases == 12, fmt::format("{} invalid fixtures instead of 12", cases));

  const auto golden = test::readFile(test::fixture("golden/fluid-solid.dot"));
  const auto first  = test::runCli({"config-viz", fluidSolid});
  const auto second = test::runCli({"config-viz", fluidSolid});
  v.check(first.exitCode == 0 && first.out == golden && second.out == golden, "DOT output differs from golden");
  v.summary = fmt::format("fluid-solid fixture clean, {} invalid configs diagnosed, DOT golden stable", cases);
}

// 10 -------------------------------------------------------------------------

void apiStateMachine(Verdict &v)
{
  const auto &calls = test::illegalCalls();
  v.check(calls.size() == 30, fmt::format("{} illegal calls instead of 30", calls.size()));
  for (const auto &call : calls) {
    if (const auto problem = test::checkIllegalCall(call); !problem.empty()) {
      v.fail("{}: {}", call.name, problem);
    }
  }
  for (const std::string config : {"explicit", "implicit"}) {
    test::TempDir dir;
    auto          args = [&](const std::string &name) {
      return std::vector<std::string>{"solverdummy", test::fixture("dummy/" + config + ".xml").string(), name,
                                      "--exchange-directory", dir.path().string()};
    };
    const auto [one, two] = test::runCliPair(args("SolverOne"), args("SolverTwo"));
    if (one.exitCode != 0 || two.exitCode != 0) {
      v.fail("solverdummy {} exited {}/{}: {}{}", config, one.exitCode, two.exitCode, one.err, two.err);
    }
  }
  v.summary = fmt::format("{} illegal call orders raise phase errors, solverdummy pairs exit 0", calls.size());
}

struct Criterion {
  int                           number;
  const char                   *name;
  double                        budget; ///< seconds, 0 for none
  std::function<void(Verdict &)> run;
};

} // namespace

int main()
{
  const std::vector<Criterion> criteria{
      {1, "mapping invariants", 10.0, mappingInvariants},
      {2, "linear reproduction", 5.0, linearReproduction},
      {3, "convergence orders", 30.0, convergenceOrders},
      {4, "quasi-Newton exactness", 2.0, quasiNewton},
      {5, "Aitken scalar exactness", 0.0, aitkenExactness},
      {6, "heat1d vs monolithic", 0.0, heatVsMonolithic},
      {7, "heat1d iteration ordering", 0.0, iterationOrdering},
      {8, "protocol", 0.0, protocol},
      {9, "configuration", 0.0, configSuite},
      {10, "API state machine", 0.0, apiStateMachine},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    Verdict    v;
    const auto start = Clock::now();
    try {
      c.run(v);
    } catch (const std::exception &e) {
      v.fail("exception: {}", e.what());
    }
    const double elapsed = seconds(start);
    if (c.budget > 0 && elapsed >= c.budget) {
      v.fail("took {:.2f} s, budget {:.0f} s", elapsed, c.budget);
    }
    const bool ok = v.problems.empty();
    failed += !ok;
    fmt::print("{} {:2d} {} ({:.2f} s): {}\n", ok ? "PASS" : "FAIL", c.number, c.name, elapsed, v.summary);
    for (std::size_t i = 0; i < v.problems.size() && i < 5; ++i) {
      fmt::print("       {}\n", v.problems[i]);
    }
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
