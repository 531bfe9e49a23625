#include "mixrec/recovery.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "mixrec/smoothness_lab.h"

namespace mixrec {
namespace {

std::shared_ptr<const RecoveryPlan> MakePlan(const SmoothnessParams& s, int r) {
  return std::make_shared<const RecoveryPlan>(BuildPlan(s, r));
}

SmoothnessParams Smooth2D(MultiIndex lambda = {0, 0}) {
  return DeriveParams(2, {3.0, 3.0}, 2.0, 2.0, kInfinity, lambda);
}

Point RandomPoint(std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point x(d);
  for (double& v : x) v = u(rng);
  return x;
}

TEST(Sample, ZeroFunctionGivesZeros) {
  auto plan = MakePlan(Smooth2D(), 3);
  SampleSet s = Sample([](std::span<const double>) { return 0.0; }, plan);
  EXPECT_EQ(std::int64_t(s.size()), plan->n_actual());
  for (double v : s.values()) EXPECT_EQ(v, 0.0);
}

TEST(Sample, EvaluatesOncePerPoint) {
  auto plan = MakePlan(Smooth2D(), 4);
  std::int64_t calls = 0;
  SampleSet s = Sample(
      [&calls](std::span<const double> x) {
        ++calls;
        return x[0] + x[1];
      },
      plan);
  EXPECT_EQ(calls, plan->n_actual());
  EXPECT_EQ(std::int64_t(s.size()), plan->n_actual());
}

TEST(Sample, ReportsFailingPoint) {
  auto plan = MakePlan(Smooth2D(), 2);
  try {
    Sample([](std::span<const double> x) { return x[0] > 0.5 ? std::nan("") : 1.0; },
           plan);
    FAIL() << "expected SampleError";
  } catch (const SampleError& e) {
    EXPECT_GT(e.point()[0], 0.5);
  }
  EXPECT_THROW(Sample([](std::span<const double>) -> double {
                 throw std::runtime_error("boom");
               }, plan),
               SampleError);
}

TEST(SampleSet, RejectsCountMismatch) {
  auto plan = MakePlan(Smooth2D(), 2);
  EXPECT_THROW(SampleSet(plan, std::vector<double>(plan->n_actual() + 1)),
               std::invalid_argument);
}

TEST(Reconstruct, ZeroSamplesGiveZeroFunction) {
  SmoothnessParams s = Smooth2D({1, 1});
  auto plan = MakePlan(s, 4);
  Approximant a = Reconstruct(SampleSet(plan, std::vector<double>(plan->n_actual())),
                              {1, 1});
  std::mt19937_64 rng(1);
  for (int n = 0; n < 20; ++n) EXPECT_EQ(a(RandomPoint(2, rng).span()), 0.0);
}

TEST(Reconstruct, ExactOnPolynomials) {
  // l - e = (2, 2); D^{(1,1)} of x^2 y^2 + x y - 3 y^2 is 4 x y + 1.
  const MultiIndex lambda{1, 1};
  SmoothnessParams s = DeriveParams(2, {2.5, 2.5}, 2.0, 2.0, kInfinity, lambda);
  ASSERT_EQ(s.InterpDegree(), (MultiIndex{2, 2}));
  PointFunction f = [](std::span<const double> x) {
    return x[0] * x[0] * x[1] * x[1] + x[0] * x[1] - 3 * x[1] * x[1];
  };
  auto plan = MakePlan(s, 5);
  Approximant a = Reconstruct(Sample(f, plan), lambda);
  std::mt19937_64 rng(2);
  for (int n = 0; n < 100; ++n) {
    Point x = RandomPoint(2, rng);
    EXPECT_NEAR(a(x.span()), 4 * x[0] * x[1] + 1, 1e-9);
  }
}

TEST(Reconstruct, ExactOnPolynomialsValueRecovery) {
  SmoothnessParams s = DeriveParams(3, {2.5, 1.5, 3.5}, 2.0, 2.0, kInfinity,
                                    {0, 0, 0});
  PointFunction f = [](std::span<const double> x) {
    return 1.0 + x[0] * x[0] * x[1] - x[2] * x[2] * x[2] * x[0];
  };
  Approximant a = Reconstruct(Sample(f, MakePlan(s, 3)), {0, 0, 0});
  std::mt19937_64 rng(3);
  for (int n = 0; n < 100; ++n) {
    Point x = RandomPoint(3, rng);
    EXPECT_NEAR(a(x.span()), f(x.span()), 1e-9);
  }
}

TEST(Reconstruct, RegistryPolynomialIsExact) {
  const TestFunction poly = FindTestFunction("poly", 2);
  SmoothnessParams s = DeriveParams(2, {2.5, 2.5}, 2.0, 2.0, kInfinity, {1, 0});
  Approximant a = Reconstruct(Sample(poly.AsFunction(), MakePlan(s, 4)), {1, 0});
  std::mt19937_64 rng(4);
  for (int n = 0; n < 100; ++n) {
    Point x = RandomPoint(2, rng);
    EXPECT_NEAR(a(x.span()), poly.Derivative({1, 0}, x.span()), 1e-9);
  }
}

TEST(Reconstruct, IsLinearInSamples) {
  SmoothnessParams s = Smooth2D({1, 0});
  auto plan = MakePlan(s, 5);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<double> s1(plan->n_actual()), s2(plan->n_actual()), mix(plan->n_actual());
  const double a = 1.7, b = -0.3;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    s1[i] = g(rng);
    s2[i] = g(rng);
    mix[i] = a * s1[i] + b * s2[i];
  }
  Approximant r1 = Reconstruct(SampleSet(plan, s1), {1, 0});
  Approximant r2 = Reconstruct(SampleSet(plan, s2), {1, 0});
  Approximant rm = Reconstruct(SampleSet(plan, mix), {1, 0});
  for (int n = 0; n < 50; ++n) {
    Point x = RandomPoint(2, rng);
    EXPECT_NEAR(rm(x.span()), a * r1(x.span()) + b * r2(x.span()), 1e-10);
  }
}

TEST(Reconstruct, CombinationMatchesBooleanDifferences) {
  const TestFunction trig = FindTestFunction("trig", 2);
  for (const MultiIndex& lambda : {MultiIndex{0, 0}, MultiIndex{1, 1}}) {
    SmoothnessParams s = Smooth2D(lambda);
    Approximant a = Reconstruct(Sample(trig.AsFunction(), MakePlan(s, 5)), lambda);
    EXPECT_LT(a.ActiveLevelCount(), a.plan().levels.size());
    std::mt19937_64 rng(6);
    for (int n = 0; n < 40; ++n) {
      Point x = RandomPoint(2, rng);
      EXPECT_NEAR(a(x.span()), a.EvaluateByBooleanDifferences(x.span()), 1e-9);
    }
  }
}

TEST(Reconstruct, CombinationCoefficientsFromIndexSet) {
  SmoothnessParams s = Smooth2D();
  Approximant a = Reconstruct(SampleSet(MakePlan(s, 3),
                                        std::vector<double>(PlanPointCount(s, 3))),
                              {0, 0});
  // β = e, r = 3: the top diagonal gets +1, the one below -1, the rest 0.
  const auto& levels = a.plan().levels;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const int expected = Sum(levels[i]) == 3 ? 1 : Sum(levels[i]) == 2 ? -1 : 0;
    EXPECT_EQ(a.CombinationCoefficient(i), expected) << levels[i];
  }
}

TEST(Reconstruct, RejectsDerivativeOfWrongDimension) {
  auto plan = MakePlan(Smooth2D(), 2);
  SampleSet samples(plan, std::vector<double>(plan->n_actual()));
  EXPECT_THROW(Reconstruct(samples, {1, 0, 0}), std::invalid_argument);
}

TEST(Reconstruct, ErrorDecreasesWithLevel) {
  const TestFunction trig = FindTestFunction("trig", 2);
  for (const MultiIndex& lambda : {MultiIndex{0, 0}, MultiIndex{1, 0}}) {
    SmoothnessParams s = DeriveParams(2, {2.0, 2.0}, 2.0, 2.0, kInfinity, lambda);
    double previous = std::numeric_limits<double>::infinity();
    for (int r = 2; r <= 8; ++r) {
      Approximant a = Reconstruct(Sample(trig.AsFunction(), MakePlan(s, r)), lambda);
      PointFunction g = [&a](std::span<const double> x) { return a(x); };
      const double err = LqError(g, trig.DerivativeFunction(lambda), 2.0, 2);
      EXPECT_LE(err, 1.01 * previous) << "r=" << r << " lambda=" << lambda;
      previous = err;
    }
  }
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  for (int k = 1; k <= 8; ++k) {
    std::vector<double> nodes, weights;
    GaussLegendre(k, nodes, weights);
    ASSERT_EQ(int(nodes.size()), k);
    for (int deg = 0; deg <= 2 * k - 1; ++deg) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += weights[i] * std::pow(nodes[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      EXPECT_NEAR(s, exact, 1e-14) << "k=" << k << " deg=" << deg;
    }
  }
}

TEST(LqError, UnitConstant) {
  PointFunction one = [](std::span<const double>) { return 1.0; };
  PointFunction zero = [](std::span<const double>) { return 0.0; };
  EXPECT_NEAR(LqError(one, zero, 2.0, 2), 1.0, 1e-14);
}

TEST(LqError, LinearFunction) {
  PointFunction x0 = [](std::span<const double> x) { return x[0]; };
  PointFunction zero = [](std::span<const double>) { return 0.0; };
  EXPECT_NEAR(LqError(x0, zero, 2.0, 1), 1.0 / std::sqrt(3.0), 1e-10);
  // ‖x‖_{L_1} = 1/2, ‖x‖_{L_3} = 4^{-1/3}
  EXPECT_NEAR(LqError(x0, zero, 1.0, 1), 0.5, 1e-12);
  EXPECT_NEAR(LqError(x0, zero, 3.0, 1), std::pow(0.25, 1.0 / 3.0), 1e-12);
}

TEST(LqError, SupNormOfConstantDifference) {
  PointFunction g = [](std::span<const double> x) { return x[0] * x[1] - 0.75; };
  PointFunction h = [](std::span<const double> x) { return x[0] * x[1]; };
  EXPECT_EQ(LqError(g, h, kInfinity, 2), 0.75);
  EXPECT_EQ(ResolvedSupGrid({}, 2), 1025);
  EXPECT_EQ(ResolvedSupGrid({}, 3), 65);
  EXPECT_EQ(ResolvedCellsExponent({}, 2), 6);
  EXPECT_EQ(ResolvedCellsExponent({}, 3), 4);
}

TEST(LqError, QuadratureIsResolvedAtLargestBudget) {
  // Doubling the cells per axis changes the measured recovery error by < 1%.
  struct Case {
    const char* id;
    Point alpha;
    MultiIndex lambda;
  };
  for (const Case& c : {Case{"trig", {2.0, 2.0}, {0, 0}},
                        Case{"aniso-power", {2.0, 1.5}, {1, 0}}}) {
    const TestFunction f = FindTestFunction(c.id, 2);
    SmoothnessParams s = DeriveParams(2, c.alpha, 2.0, 2.0, 2.0, c.lambda);
    auto plan = MakePlan(s, ChooseLevel(s, 1 << 14));
    Approximant a = Reconstruct(Sample(f.AsFunction(), plan), c.lambda);
    PointFunction g = [&a](std::span<const double> x) { return a(x); };
    const QuadratureSpec base = ResolveForPlan({}, *plan);
    QuadratureSpec doubled = base;
    for (int& e : doubled.min_axis_exponent) ++e;
    doubled.cells_exponent = ResolvedCellsExponent(base, 2) + 1;
    const double e0 = LqError(g, f.DerivativeFunction(c.lambda), 2.0, 2, base);
    const double e1 = LqError(g, f.DerivativeFunction(c.lambda), 2.0, 2, doubled);
    EXPECT_LT(std::abs(e1 - e0), 0.01 * e0) << c.id;
  }
}

TEST(ResolveForPlan, MatchesFinestLevelPerAxis) {
  SmoothnessParams s = DeriveParams(2, {2.0, 1.5}, 2.0, 2.0, 2.0, {1, 0});
  RecoveryPlan plan = BuildPlan(s, 8);
  const QuadratureSpec q = ResolveForPlan({}, plan);
  // β = (1, sqrt(1.5)): the finest levels are 8 and floor(8 / 1.2247) = 6.
  EXPECT_EQ(q.min_axis_exponent, (MultiIndex{8, 6}));
  EXPECT_EQ(ResolvedAxisExponents(q, 2), (MultiIndex{8, 6}));
  EXPECT_EQ(ResolvedAxisExponents({}, 2), (MultiIndex{6, 6}));
}

}  // namespace
}  // namespace mixrec
