#include <benchmark/benchmark.h>

#include <vector>

#include "phaseless/forward.hpp"
#include "phaseless/forward_medium.hpp"
#include "phaseless/forward_obstacle.hpp"
#include "phaseless/phase_retrieval.hpp"
#include "phaseless/special_functions.hpp"

using namespace phaseless;

static void BM_HankelSequence(benchmark::State& state) {
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(special::hankel1_sequence(static_cast<int>(state.range(0)), x));
    x += 1e-3;
  }
}
BENCHMARK(BM_HankelSequence)->Arg(16)->Arg(60);

static void BM_Bessel01(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(special::bessel01(x));
    x = x > 50.0 ? 0.1 : x + 0.37;
  }
}
BENCHMARK(BM_Bessel01);

static void BM_ObstacleSetup(benchmark::State& state) {
  const Obstacle o{builtin_kite({}), BoundaryCondition::sound_soft, {}, static_cast<int>(state.range(0))};
  for (auto _ : state) {
    ObstacleSolver solver(o, 2.0);
    benchmark::DoNotOptimize(solver.coupling());
  }
}
BENCHMARK(BM_ObstacleSetup)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_ObstacleSolve(benchmark::State& state) {
  const ObstacleSolver solver({builtin_kite({}), BoundaryCondition::sound_soft, {}, 128}, 2.0);
  const auto inc = IncidentField::plane(2.0, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(inc));
}
BENCHMARK(BM_ObstacleSolve)->Unit(benchmark::kMicrosecond);

static void BM_MediumApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MediumSolver solver(MediumIndex::disk({}, 1.0, 1.2, n, {}, 1.1), 2.0);
  const std::vector<Complex> u(static_cast<std::size_t>(n) * n, Complex(1.0, 0.5));
  for (auto _ : state) benchmark::DoNotOptimize(solver.apply(u));
}
BENCHMARK(BM_MediumApply)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Retrieve(benchmark::State& state) {
  const Scene s(2.0, Obstacle{BoundaryCurve::circle({}, 1.0), BoundaryCondition::sound_soft, {}, 128},
                MeasurementSet::circle({}, 15.0, 128), DirectionGrid{192, 1.5 * kPi});
  const PhaselessDataset data = synthesize(s);
  for (auto _ : state) benchmark::DoNotOptimize(retrieve(data, s));
}
BENCHMARK(BM_Retrieve)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
