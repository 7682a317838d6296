#include <gtest/gtest.h>

#include <random>

#include "Oracles.hpp"
#include "duet/Error.hpp"
#include "duet/acceleration/Accelerator.hpp"

using namespace duet;
using namespace duet::acceleration;

namespace {

struct LinearMap {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd operator()(const Eigen::VectorXd &x) const { return A * x + b; }
  Eigen::VectorXd fixedPoint() const
  {
    const Eigen::Index n = b.size();
    return (Eigen::MatrixXd::Identity(n, n) - A).fullPivLu().solve(b);
  }
};

LinearMap randomContraction(std::mt19937_64 &rng, Eigen::Index n, double norm = 0.9)
{
  LinearMap map;
  map.A = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return std::normal_distribution<double>()(rng); });
  map.A *= norm / map.A.jacobiSvd().singularValues()[0];
  map.b = test::randomVector(rng, n);
  return map;
}

/// Number of solver evaluations until ||H(x) - x|| < tol, or -1.
int iterateToConvergence(Accelerator &acc, const LinearMap &H, Eigen::VectorXd &x, double tol, int maxIterations)
{
  for (int k = 1; k <= maxIterations; ++k) {
    const Eigen::VectorXd xTilde = H(x);
    if ((xTilde - x).norm() < tol) {
      acc.windowConverged();
      return k;
    }
    x = acc.accelerate(x, xTilde);
  }
  return -1;
}

AccelerationConfig config(Method method, double omega = 0.5)
{
  AccelerationConfig c;
  c.method            = method;
  c.initialRelaxation = omega;
  return c;
}

} // namespace

TEST(ConstantRelax, Examples)
{
  const Eigen::VectorXd x  = Eigen::VectorXd::Constant(1, 0.0);
  const Eigen::VectorXd hx = Eigen::VectorXd::Constant(1, 2.0);
  EXPECT_EQ(constantRelax(x, hx, 1.0)[0], 2.0);
  EXPECT_EQ(constantRelax(x, hx, 0.5)[0], 1.0);
  EXPECT_EQ(constantRelax(hx, hx, 0.3)[0], 2.0);
  EXPECT_THROW(constantRelax(x, hx, 0.0), Error);
  EXPECT_THROW(constantRelax(x, hx, 1.5), Error);
}

TEST(Aitken, HandEvaluatedExample)
{
  AccelerationState s({1});
  s.initialRelaxation = 0.5;
  auto H = [](double x) { return 0.5 * x + 1.0; };
  Eigen::VectorXd x = Eigen::VectorXd::Zero(1);
  x = aitken(s, x, Eigen::VectorXd::Constant(1, H(x[0])));
  EXPECT_EQ(x[0], 0.5);
  x = aitken(s, x, Eigen::VectorXd::Constant(1, H(x[0])));
  EXPECT_DOUBLE_EQ(s.aitkenFactor, 2.0);
  EXPECT_DOUBLE_EQ(x[0], 2.0);
}

TEST(Aitken, ZeroResidualAndStagnation)
{
  AccelerationState     s({2});
  const Eigen::Vector2d x(1, 2);
  EXPECT_EQ(aitken(s, x, x), x);
  EXPECT_EQ(s.iteration, 0);

  AccelerationState     t({2});
  const Eigen::Vector2d step(1, 1);
  aitken(t, x, x + step);
  EXPECT_THROW(aitken(t, x, x + step), Error);
}

TEST(Aitken, ScalarLinearMapsAreExactAfterTwoUpdates)
{
  std::mt19937_64                        rng(17);
  std::uniform_real_distribution<double> ua(-0.99, 0.99), ub(-10, 10);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = ua(rng), b = ub(rng);
    Accelerator  acc(config(Method::Aitken), {1});
    Eigen::VectorXd x = Eigen::VectorXd::Zero(1);
    for (int k = 0; k < 2; ++k) {
      x = acc.accelerate(x, Eigen::VectorXd::Constant(1, a * x[0] + b));
    }
    const double exact = b / (1 - a);
    EXPECT_NEAR(x[0], exact, 1e-12 * std::max(1.0, std::abs(exact))) << a << " " << b;
  }
}

TEST(Iqn, TwoByTwoExample)
{
  LinearMap H;
  H.A.resize(2, 2);
  H.A << 0.5, 0.1, 0.0, 0.3;
  H.b = Eigen::Vector2d(1, 1);
  for (auto method : {Method::IqnIls, Method::IqnImvj}) {
    Accelerator     acc(config(method), {2});
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
    int             updates = 0;
    while ((H(x) - x).norm() >= 1e-12 && updates < 10) {
      x = acc.accelerate(x, H(x));
      ++updates;
    }
    EXPECT_LE(updates, 4);
    EXPECT_LT((x - H.fixedPoint()).norm(), 1e-12);
  }
}

TEST(Iqn, RandomContractionsConvergeWithinNPlusTwo)
{
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const auto         H = randomContraction(rng, n);
    Accelerator        acc(config(Method::IqnIls), {n});
    Eigen::VectorXd    x = Eigen::VectorXd::Zero(n);
    const int          k = iterateToConvergence(acc, H, x, 1e-10, 50);
    EXPECT_GE(k, 1);
    EXPECT_LE(k, n + 2) << "n=" << n;
  }
}

TEST(Iqn, MultiSecantJacobianReproducesHistory)
{
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const auto         H = randomContraction(rng, n, 0.8);
    AccelerationState  s({n});
    Eigen::VectorXd    x = test::randomVector(rng, n);
    for (int k = 0; k < n + 1 && (H(x) - x).norm() > 1e-8; ++k) {
      x = iqnUpdate(s, x, H(x), QuasiNewton::Ils, 1e-2);
      if (s.columns() > 0) {
        const Eigen::MatrixXd J = secantInverseJacobian(s, false);
        EXPECT_LT((J * s.residualMatrix() - s.valueMatrix()).norm(), 1e-10);
      }
    }
  }
}

TEST(Iqn, FixedPointInputIsReturnedUnchanged)
{
  AccelerationState     s({3});
  const Eigen::Vector3d x(1, -2, 3);
  EXPECT_EQ(iqnUpdate(s, x, x, QuasiNewton::Ils, 1e-2), x);
  EXPECT_EQ(iqnUpdate(s, x, x, QuasiNewton::Imvj, 1e-2), x);
}

TEST(Iqn, RejectsNonFiniteData)
{
  AccelerationState s({2});
  Eigen::Vector2d   bad(1, std::numeric_limits<double>::quiet_NaN());
  EXPECT_THROW(iqnUpdate(s, Eigen::Vector2d(0, 0), bad, QuasiNewton::Ils, 1e-2), Error);
}

TEST(Iqn, ColumnCapKeepsNewest)
{
  std::mt19937_64 rng(6);
  const auto      H = randomContraction(rng, 6, 0.95);
  AccelerationConfig c = config(Method::IqnIls);
  c.maxColumns         = 3;
  Accelerator     acc(c, {6});
  Eigen::VectorXd x = Eigen::VectorXd::Zero(6);
  for (int window = 0; window < 4; ++window) {
    LinearMap shifted = H;
    shifted.b         = test::randomVector(rng, 6);
    for (int k = 0; k < 8; ++k) {
      const Eigen::VectorXd xTilde = shifted(x);
      if ((xTilde - x).norm() < 1e-13) {
        break;
      }
      x = acc.accelerate(x, xTilde);
      EXPECT_LE(acc.state().columns(), 3);
      EXPECT_EQ(acc.state().residualDifferences.size(), acc.state().valueDifferences.size());
    }
    acc.windowConverged();
  }
}

TEST(Iqn, ImvjCarriesJacobianAcrossWindows)
{
  std::mt19937_64 rng(12);
  const Eigen::Index n = 4;
  auto               H = randomContraction(rng, n);
  Accelerator        imvj(config(Method::IqnImvj), {n});
  Eigen::VectorXd    x = Eigen::VectorXd::Zero(n);
  const int          first = iterateToConvergence(imvj, H, x, 1e-10, 50);
  ASSERT_GT(first, 0);
  EXPECT_EQ(imvj.state().columns(), 0);
  // the stored inverse Jacobian of the residual is exact for a linear map
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd expected = H.A * (H.A - I).inverse();
  EXPECT_LT((imvj.state().previousJacobian - expected).norm(), 1e-6);

  H.b = test::randomVector(rng, n);
  const int second = iterateToConvergence(imvj, H, x, 1e-10, 50);
  EXPECT_GT(second, 0);
  EXPECT_LT(second, first);
  EXPECT_LT((x - H.fixedPoint()).norm(), 1e-9);
}

TEST(Iqn, ImvjSecantIdentityWithPreviousJacobian)
{
  std::mt19937_64   rng(13);
  const auto        H = randomContraction(rng, 3);
  AccelerationState s({3});
  s.previousJacobian = Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return std::uniform_real_distribution<double>(-1, 1)(rng); });
  Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
  for (int k = 0; k < 3; ++k) {
    x = iqnUpdate(s, x, H(x), QuasiNewton::Imvj, 1e-2);
  }
  ASSERT_GT(s.columns(), 0);
  const Eigen::MatrixXd J = secantInverseJacobian(s, true);
  EXPECT_LT((J * s.residualMatrix() - s.valueMatrix()).norm(), 1e-10);
}

TEST(Iqn, HomogeneousUnderScaling)
{
  std::mt19937_64 rng(14);
  const auto      H = randomContraction(rng, 4);
  const double    scale = 37.5;
  LinearMap       Hs = H;
  Hs.b *= scale;
  for (auto method : {Method::Aitken, Method::IqnIls, Method::IqnImvj}) {
    Accelerator     a(config(method), {2, 2}), b(config(method), {2, 2});
    Eigen::VectorXd x = test::randomVector(rng, 4);
    Eigen::VectorXd y = scale * x;
    for (int k = 0; k < 5; ++k) {
      x = a.accelerate(x, H(x));
      y = b.accelerate(y, Hs(y));
      EXPECT_LT((y - scale * x).norm(), 1e-9 * scale * std::max(1.0, x.norm()));
    }
  }
}

TEST(Filter, Examples)
{
  AccelerationState dup({3});
  const Eigen::Vector3d c(1, 2, 3);
  dup.residualDifferences = {c, c};
  dup.valueDifferences    = {c, c};
  EXPECT_EQ(filterColumns(dup, 1e-2), std::vector<int>({1}));
  EXPECT_EQ(dup.columns(), 1);

  AccelerationState orth({3});
  orth.residualDifferences = {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 5, 0), Eigen::Vector3d(0, 0, 1e-6)};
  orth.valueDifferences    = orth.residualDifferences;
  EXPECT_TRUE(filterColumns(orth, 1e-2).empty());
  EXPECT_EQ(orth.columns(), 3);

  std::mt19937_64   rng(1);
  AccelerationState near({6});
  const auto        v = test::randomVector(rng, 6);
  near.residualDifferences = {v, v + 1e-9 * test::randomVector(rng, 6)};
  near.valueDifferences    = {Eigen::VectorXd::Ones(6), Eigen::VectorXd::Zero(6)};
  EXPECT_EQ(filterColumns(near, 1e-6), std::vector<int>({1}));
  EXPECT_EQ(near.valueDifferences.front(), Eigen::VectorXd::Ones(6));
}

TEST(Preconditioner, Weights)
{
  AccelerationState s({2, 2});
  Eigen::Vector4d   r(1, 0, 600, 800);
  const auto        w = updatePreconditioner(s, r);
  EXPECT_DOUBLE_EQ(w[0], 1.0);
  EXPECT_DOUBLE_EQ(w[1], 1e-3);
  // frozen for the rest of the window
  EXPECT_EQ(updatePreconditioner(s, Eigen::Vector4d(5, 5, 5, 5)), w);
  endWindow(s, Method::IqnIls);
  EXPECT_EQ(updatePreconditioner(s, Eigen::Vector4d(0, 0, 3, 4)), std::vector<double>({1.0, 0.2}));
}

TEST(Preconditioner, SingleBlockDoesNotChangeIterates)
{
  std::mt19937_64 rng(30);
  const auto      H = randomContraction(rng, 5);
  AccelerationState weighted({5}), plain({5});
  plain.weightsFrozen = true;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(5), y = x;
  for (int k = 0; k < 5; ++k) {
    x = iqnUpdate(weighted, x, H(x), QuasiNewton::Ils, 1e-2);
    y = iqnUpdate(plain, y, H(y), QuasiNewton::Ils, 1e-2);
    EXPECT_LT((x - y).norm(), 1e-12);
  }
  EXPECT_NE(weighted.blockWeights[0], 1.0);
}

TEST(Accelerator, Validation)
{
  EXPECT_THROW(Accelerator(config(Method::Constant, 0.0), {1}), Error);
  AccelerationConfig c = config(Method::IqnIls);
  c.maxColumns         = 0;
  EXPECT_THROW(Accelerator(c, {1}), Error);
  Accelerator none(config(Method::None), {1});
  EXPECT_EQ(none.accelerate(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1))[0], 1.0);
}

TEST(Accelerator, IterationCountsOnStiffContraction)
{
  std::mt19937_64 rng(99);
  const auto      H = randomContraction(rng, 5, 0.97);
  auto            count = [&](Method m) {
    Accelerator     acc(config(m), {5});
    Eigen::VectorXd x = Eigen::VectorXd::Zero(5);
    return iterateToConvergence(acc, H, x, 1e-8, 5000);
  };
  const int iqn = count(Method::IqnIls), constant = count(Method::Constant);
  EXPECT_GT(iqn, 0);
  EXPECT_LE(iqn, 7);
  EXPECT_GT(constant, iqn);
}
