#include <cmath>
#include <memory>
#include <random>

#include "benchmark/benchmark.h"
#include "mixrec/bspline.h"
#include "mixrec/recovery.h"
#include "mixrec/smoothness_lab.h"
#include "mixrec/sparse_grid.h"

namespace {

using namespace mixrec;

void BM_BSplineDerivative(benchmark::State& state) {
  const int m = int(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, m + 1.0);
  std::vector<double> xs(1024);
  for (double& x : xs) x = u(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(BSplineDerivative(m, m / 2, xs[i++ & 1023]));
  }
}
BENCHMARK(BM_BSplineDerivative)->DenseRange(0, 6, 2);

void BM_BuildPlan(benchmark::State& state) {
  const SmoothnessParams s =
      DeriveParams(2, {2.0, 2.0}, 2.0, 2.0, kInfinity, {0, 0});
  const int r = int(state.range(0));
  for (auto _ : state) {
    RecoveryPlan plan = BuildPlan(s, r);
    benchmark::DoNotOptimize(plan.points.data());
  }
  state.counters["points"] = double(PlanPointCount(s, r));
}
BENCHMARK(BM_BuildPlan)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

void BM_ApproximantEvaluation(benchmark::State& state) {
  const MultiIndex lambda{1, 0};
  const SmoothnessParams s = DeriveParams(2, {2.0, 1.5}, 2.0, 2.0, 2.0, lambda);
  const TestFunction f = FindTestFunction("aniso-power", 2);
  auto plan = std::make_shared<const RecoveryPlan>(BuildPlan(s, int(state.range(0))));
  const Approximant a = Reconstruct(Sample(f.AsFunction(), plan), lambda);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> xs;
  for (int i = 0; i < 1024; ++i) xs.push_back(Point{u(rng), u(rng)});
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(a(xs[i++ & 1023].span()));
  state.counters["n_actual"] = double(plan->n_actual());
  state.counters["active_levels"] = double(a.ActiveLevelCount());
}
BENCHMARK(BM_ApproximantEvaluation)->DenseRange(4, 10, 2);

void BM_Reconstruct(benchmark::State& state) {
  const SmoothnessParams s = DeriveParams(2, {2.0, 2.0}, 2.0, 2.0, kInfinity, {0, 0});
  const TestFunction f = FindTestFunction("trig", 2);
  auto plan = std::make_shared<const RecoveryPlan>(BuildPlan(s, int(state.range(0))));
  const SampleSet samples = Sample(f.AsFunction(), plan);
  for (auto _ : state) {
    Approximant a = Reconstruct(samples, {0, 0});
    benchmark::DoNotOptimize(&a);
  }
}
BENCHMARK(BM_Reconstruct)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
