#include <benchmark/benchmark.h>
#include <random>

#include "duet/acceleration/Acceleration.hpp"

using namespace duet::acceleration;

namespace {

// One full window of fixed-point iterations on a random linear contraction.
void window(benchmark::State &state, QuasiNewton variant)
{
  const Eigen::Index n = state.range(0);
  std::mt19937_64    rng(1);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd A = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return normal(rng); });
  A *= 0.9 / A.norm();
  const Eigen::VectorXd b = Eigen::VectorXd::NullaryExpr(n, [&] { return normal(rng); });

  for (auto _ : state) {
    AccelerationState s({n});
    s.maxColumns      = 40;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < 30; ++k) {
      const Eigen::VectorXd xTilde = A * x + b;
      if ((xTilde - x).norm() < 1e-10) {
        break;
      }
      x = iqnUpdate(s, x, xTilde, variant, 1e-2);
    }
    endWindow(s, variant == QuasiNewton::Ils ? Method::IqnIls : Method::IqnImvj);
    benchmark::DoNotOptimize(x);
  }
}

void iqnIls(benchmark::State &state) { window(state, QuasiNewton::Ils); }
void iqnImvj(benchmark::State &state) { window(state, QuasiNewton::Imvj); }

} // namespace

BENCHMARK(iqnIls)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond);
BENCHMARK(iqnImvj)->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMillisecond);
