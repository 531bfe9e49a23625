#include "mixrec/sparse_grid.h"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "mixrec/poly_interp.h"

namespace mixrec {
namespace {

SmoothnessParams Params1D() {
  // l = 1, so the local polynomials are constants and the node is 1/2.
  return DeriveParams(1, {0.75}, 2.0, 2.0, kInfinity, {0});
}

SmoothnessParams Params2D() {
  return DeriveParams(2, {2.0, 2.0}, 2.0, 2.0, kInfinity, {0, 0});
}

std::set<MultiIndex> BruteIndexSet(const Point& beta, double r, int cap) {
  std::set<MultiIndex> out;
  const std::size_t d = beta.size();
  ForEachInBox(MultiIndex(d, 0), MultiIndex(d, cap), [&](const MultiIndex& k) {
    if (Dot(k, beta) <= r + 1e-12) out.insert(k);
  });
  return out;
}

TEST(DeriveParams, SymmetricCase) {
  SmoothnessParams s = DeriveParams(2, {1.5, 1.5}, 2.0, 2.0, kInfinity, {0, 0});
  EXPECT_DOUBLE_EQ(s.mn, 1.5);
  EXPECT_EQ(s.cmn, 2);
  EXPECT_EQ(s.critical_axes, (std::vector<int>{0, 1}));
  EXPECT_EQ(s.beta, (Point{1.0, 1.0}));
  EXPECT_EQ(s.l, (MultiIndex{2, 2}));
  // θ = ∞, so 1/max(p,θ) = 0
  EXPECT_DOUBLE_EQ(s.LogExponent(), 1.5 + 1.0);
}

TEST(DeriveParams, DerivativeWithEmbeddingLoss) {
  SmoothnessParams s = DeriveParams(2, {2.0, 1.5}, 2.0, kInfinity, kInfinity, {1, 0});
  EXPECT_DOUBLE_EQ(s.gamma[0], 0.5);
  EXPECT_DOUBLE_EQ(s.gamma[1], 1.0);
  EXPECT_DOUBLE_EQ(s.mn, 0.5);
  EXPECT_EQ(s.cmn, 1);
  EXPECT_EQ(s.critical_axes, (std::vector<int>{0}));
  EXPECT_DOUBLE_EQ(s.beta[0], 1.0);
  EXPECT_DOUBLE_EQ(s.beta[1], std::sqrt(2.0));
  EXPECT_EQ(s.l, (MultiIndex{3, 2}));
  EXPECT_EQ(s.InterpDegree(), (MultiIndex{2, 1}));
  EXPECT_EQ(s.LogExponent(), 0.0);
}

TEST(DeriveParams, IntegrabilityCondition) {
  EXPECT_NO_THROW(DeriveParams(2, {1.2, 1.2}, 1.0, 1.0, kInfinity, {0, 0}));
  try {
    DeriveParams(2, {1.2, 0.9}, 1.0, 1.0, kInfinity, {0, 0});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("axis 2"), std::string::npos) << e.what();
  }
}

TEST(DeriveParams, PositiveGammaCondition) {
  EXPECT_THROW(DeriveParams(1, {1.5}, 2.0, 2.0, kInfinity, {2}), ValidationError);
  EXPECT_THROW(DeriveParams(1, {1.2}, 1.0, kInfinity, kInfinity, {1}),
               ValidationError);
}

TEST(DeriveParams, BetaAdmissibility) {
  for (const Point& alpha : {Point{2.0, 3.0}, Point{1.5, 2.5, 4.0},
                             Point{3.0, 1.25}}) {
    SmoothnessParams s = DeriveParams(alpha.size(), alpha, 2.0, 2.0, kInfinity,
                                      MultiIndex(alpha.size(), 0));
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      const bool critical =
          std::find(s.critical_axes.begin(), s.critical_axes.end(), int(j)) !=
          s.critical_axes.end();
      if (critical) {
        EXPECT_EQ(s.beta[j], 1.0);
      } else {
        EXPECT_GT(s.beta[j], 1.0);
        EXPECT_GT(s.gamma[j] / s.beta[j], s.mn);
      }
    }
  }
}

TEST(HyperbolicIndexSet, OneDimensional) {
  auto set = HyperbolicIndexSet({1.0}, 3);
  EXPECT_EQ(std::set<MultiIndex>(set.begin(), set.end()),
            (std::set<MultiIndex>{{0}, {1}, {2}, {3}}));
}

TEST(HyperbolicIndexSet, TwoDimensionalCardinality) {
  auto set = HyperbolicIndexSet({1.0, 1.0}, 2);
  EXPECT_EQ(set.size(), 6u);
  EXPECT_EQ(std::set<MultiIndex>(set.begin(), set.end()),
            (std::set<MultiIndex>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}));
}

TEST(HyperbolicIndexSet, MatchesBruteForceEnumeration) {
  for (const Point& beta : {Point{1.0, std::sqrt(2.0)}, Point{1.0, 1.3, 1.7},
                            Point{1.0, 1.0, 1.0}}) {
    for (double r : {1.0, 4.0, 7.0}) {
      auto set = HyperbolicIndexSet(beta, r);
      std::set<MultiIndex> got(set.begin(), set.end());
      EXPECT_EQ(got.size(), set.size());
      EXPECT_EQ(got, BruteIndexSet(beta, r, 10));
    }
  }
}

TEST(WeightedTailSum, GeometricSeries) {
  EXPECT_NEAR(WeightedTailSum({1.0}, {1.0}, 3), 0.125, 1e-15);
}

TEST(WeightedTailSum, MatchesBruteForce) {
  const Point alpha{1.0, 1.0}, beta{1.0, 1.0};
  // Σ over κ <= (40,40) outside the set; the omitted remainder is below 2^-39.
  double brute = 0.0;
  ForEachInBox(MultiIndex{0, 0}, MultiIndex{40, 40}, [&](const MultiIndex& k) {
    if (k[0] + k[1] > 5) brute += std::exp2(-(k[0] + k[1]));
  });
  EXPECT_NEAR(WeightedTailSum(alpha, beta, 5), brute, 1e-10);
  // closed form: Σ_{s>5} (s+1) 2^{-s} = 8 * 2^-5 - ... computed directly
  double closed = 0.0;
  for (int s = 6; s < 200; ++s) closed += (s + 1) * std::exp2(-s);
  EXPECT_NEAR(WeightedTailSum(alpha, beta, 5), closed, 1e-14);
}

TEST(WeightedTailSum, AnisotropicBruteForce) {
  const Point alpha{1.0, 1.5}, beta{1.0, std::sqrt(1.5)};
  for (double r : {2.0, 5.0}) {
    double brute = 0.0;
    ForEachInBox(MultiIndex{0, 0}, MultiIndex{60, 60}, [&](const MultiIndex& k) {
      if (Dot(k, beta) > r + 1e-12) brute += std::exp2(-Dot(k, alpha));
    });
    EXPECT_NEAR(WeightedTailSum(alpha, beta, r), brute, 1e-10);
  }
}

TEST(WeightedTailSum, TwoSidedRateBound) {
  // β = e, α̃ = (1,1): mn = 1, cmn = 2, so tail ≍ 2^-r r.
  double lo = 1e300, hi = 0.0;
  for (int r = 4; r <= 14; ++r) {
    const double ratio = WeightedTailSum({1.0, 1.0}, {1.0, 1.0}, r) /
                         (std::exp2(-r) * r);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  EXPECT_LT(hi / lo, 4.0);
}

TEST(WeightedHeadSum, GrowthLaw) {
  double lo = 1e300, hi = 0.0;
  for (int r = 4; r <= 14; ++r) {
    const double ratio = WeightedHeadSum({1.0, 1.0}, {1.0, 1.0}, r) /
                         (std::exp2(r) * r);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  EXPECT_LT(hi / lo, 4.0);
  // Σ_{s<=2} (s+1) 2^s = 1 + 4 + 12
  EXPECT_DOUBLE_EQ(WeightedHeadSum({1.0, 1.0}, {1.0, 1.0}, 2), 17.0);
}

TEST(DyadicRational, NormalizesToLowestTerms) {
  DyadicRational a = DyadicRational::Make(12, 5);
  EXPECT_EQ(a.numerator, 3u);
  EXPECT_EQ(a.exponent, 3);
  EXPECT_EQ(a.ToString(), "3/2^3");
  EXPECT_EQ(a.ToDouble(), 0.375);
  EXPECT_EQ(DyadicRational::Make(0, 7), DyadicRational::Make(0, 0));
}

TEST(BuildPlan, MidpointNodesOneDimension) {
  RecoveryPlan plan = BuildPlan(Params1D(), 2);
  EXPECT_EQ(plan.n_actual(), 7);
  EXPECT_EQ(plan.raw_count, 7);
  std::set<double> coords;
  for (std::int64_t i = 0; i < plan.n_actual(); ++i) {
    coords.insert(plan.PointCoordinates(i)[0]);
  }
  EXPECT_EQ(coords, (std::set<double>{0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875}));
}

TEST(BuildPlan, RawCountFormula) {
  for (int r = 1; r <= 6; ++r) {
    SmoothnessParams s = Params2D();
    RecoveryPlan plan = BuildPlan(s, r);
    std::int64_t expected = 0;
    const std::int64_t nodes = TensorNodeCount(s.InterpDegree());
    for (const MultiIndex& k : HyperbolicIndexSet(s.beta, r)) {
      expected += nodes << Sum(k);
    }
    EXPECT_EQ(plan.raw_count, expected);
    EXPECT_LE(plan.n_actual(), plan.raw_count);
  }
}

TEST(BuildPlan, PointsInsideOpenCube) {
  RecoveryPlan plan = BuildPlan(
      DeriveParams(2, {2.0, 1.5}, 2.0, 2.0, 2.0, {1, 0}), 6);
  for (std::int64_t i = 0; i < plan.n_actual(); ++i) {
    const Point x = plan.PointCoordinates(i);
    for (double v : x) {
      EXPECT_GT(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
  }
}

TEST(BuildPlan, MergesExactlyEqualCoordinates) {
  // Independent oracle: each node is (ν·2^40 + numerator) / 2^{40+κ}, reduced
  // with std::gcd-free shifting of common powers of two.
  SmoothnessParams s = Params2D();
  const int r = 5;
  RecoveryPlan plan = BuildPlan(s, r);
  const MultiIndex l = s.InterpDegree();
  std::set<std::vector<std::pair<std::uint64_t, int>>> expected;
  for (const MultiIndex& k : HyperbolicIndexSet(s.beta, r)) {
    ForEachInBox(MultiIndex{0, 0}, MultiIndex{(1 << k[0]) - 1, (1 << k[1]) - 1},
                 [&](const MultiIndex& nu) {
      ForEachInBox(MultiIndex{0, 0}, l, [&](const MultiIndex& rho) {
        std::vector<std::pair<std::uint64_t, int>> key;
        for (std::size_t j = 0; j < 2; ++j) {
          std::uint64_t num = (std::uint64_t(nu[j]) << kNodeBits) +
                              std::uint64_t(NodeNumerator(l[j], rho[j]));
          int e = kNodeBits + k[j];
          while (num % 2 == 0 && e > 0) {
            num /= 2;
            --e;
          }
          key.emplace_back(num, e);
        }
        expected.insert(key);
      });
    });
  }
  EXPECT_EQ(std::size_t(plan.n_actual()), expected.size());
  std::set<std::vector<std::pair<std::uint64_t, int>>> got;
  for (const DyadicPoint& p : plan.points) {
    got.insert({{p[0].numerator, p[0].exponent}, {p[1].numerator, p[1].exponent}});
  }
  EXPECT_EQ(got, expected);
}

TEST(BuildPlan, EveryNodeMapsToAStoredPoint) {
  SmoothnessParams s = DeriveParams(2, {2.5, 1.5}, 2.0, 2.0, kInfinity, {0, 0});
  RecoveryPlan plan = BuildPlan(s, 4);
  const std::int64_t nodes = plan.nodes_per_cell();
  for (std::size_t i = 0; i < plan.levels.size(); ++i) {
    const MultiIndex& k = plan.levels[i];
    const std::int64_t cells = std::int64_t(1) << Sum(k);
    for (std::int64_t c = 0; c < cells * nodes; ++c) {
      const std::int64_t idx = plan.node_points[plan.level_offset[i] + c];
      ASSERT_GE(idx, 0);
      ASSERT_LT(idx, plan.n_actual());
    }
  }
}

TEST(BuildPlan, ReportsOverflow) {
  EXPECT_THROW(BuildPlan(Params1D(), 30), std::overflow_error);
}

TEST(ChooseLevel, OneDimensionalBudget) {
  EXPECT_EQ(ChooseLevel(Params1D(), 7), 2);
  EXPECT_EQ(ChooseLevel(Params1D(), 14), 2);
  EXPECT_EQ(ChooseLevel(Params1D(), 15), 3);
}

TEST(ChooseLevel, RejectsBudgetBelowMinimum) {
  EXPECT_THROW(ChooseLevel(Params2D(), 2), ValidationError);
}

TEST(ChooseLevel, MonotoneAndMaximal) {
  SmoothnessParams s = Params2D();
  int previous = 0;
  for (std::int64_t n = 64; n <= 20000; n = n * 3 / 2) {
    const int r = ChooseLevel(s, n);
    EXPECT_GE(r, previous);
    previous = r;
    EXPECT_LE(PlanPointCount(s, r), n);
    EXPECT_GT(PlanPointCount(s, r + 1), n);
  }
}

TEST(PlanPointCount, GrowthWithinFactorFour) {
  SmoothnessParams s = Params2D();
  const double c = PlanPointCount(s, 6) / (std::exp2(6) * 6);
  for (int r = 2; r <= 12; ++r) {
    const double ratio = PlanPointCount(s, r) / (c * std::exp2(r) * r);
    EXPECT_LT(ratio, 4.0) << "r=" << r;
    EXPECT_GT(ratio, 0.25) << "r=" << r;
  }
}

TEST(WritePlan, RoundTrip) {
  SmoothnessParams s = DeriveParams(2, {2.0, 1.5}, 2.0, 2.0, kInfinity, {1, 0});
  RecoveryPlan plan = BuildPlan(s, 3);
  std::stringstream buf;
  WritePlan(buf, plan);
  const std::string text = buf.str();
  EXPECT_EQ(text[0], '#');
  const auto lines = ReadPlan(buf);
  ASSERT_EQ(std::int64_t(lines.size()), plan.n_actual());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    EXPECT_EQ(lines[i].coordinates, plan.points[i]);
    EXPECT_EQ(lines[i].tag.level, plan.tags[i].level);
    EXPECT_EQ(lines[i].tag.cell, plan.tags[i].cell);
    EXPECT_EQ(lines[i].tag.node, plan.tags[i].node);
  }
}

TEST(WritePlan, LineFormat) {
  RecoveryPlan plan = BuildPlan(Params1D(), 1);
  std::stringstream buf;
  WritePlan(buf, plan);
  std::string header, first;
  std::getline(buf, header);
  std::getline(buf, first);
  EXPECT_EQ(first, "0\t0\t0\t1/2^1");
}

}  // namespace
}  // namespace mixrec
