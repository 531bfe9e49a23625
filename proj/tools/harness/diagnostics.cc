#include "harness/diagnostics.h"

#include <cmath>
#include <functional>
#include <memory>
#include <ostream>
#include <random>
#include <stdexcept>

#include "mixrec/bspline.h"
#include "mixrec/dyadic_operators.h"
#include "mixrec/poly_interp.h"
#include "mixrec/recovery.h"
#include "mixrec/smoothness_lab.h"
#include "mixrec/sparse_grid.h"

namespace mixrec::harness {
namespace {

using Rng = std::mt19937_64;

struct Suite {
  std::string name;
  std::function<void(Rng&, std::vector<DiagnosticResult>&)> run;
};

void Record(std::vector<DiagnosticResult>& out, const std::string& suite,
            const std::string& property, double residual, double limit) {
  out.push_back({suite, property, residual <= limit, residual, limit});
}

Point RandomPoint(Rng& rng, std::size_t d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point x(d);
  for (double& v : x) v = u(rng);
  return x;
}

double FactorGrowthResidual(const std::vector<double>& values,
                            const std::vector<double>& model, std::size_t fit) {
  const double c = values[fit] / model[fit];
  double worst = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double ratio = values[i] / (c * model[i]);
    worst = std::max({worst, ratio, 1.0 / ratio});
  }
  return worst;
}

void BSplineSuite(Rng& rng, std::vector<DiagnosticResult>& out) {
  double pou = 0.0;
  for (std::size_t d = 1; d <= 3; ++d) {
    for (int m = 0; m <= 4; ++m) {
      const MultiIndex order(d, m);
      const MultiIndex level(d, d == 3 ? 1 : 2);
      const ShiftBox box = ActiveTranslates(order, level);
      for (int i = 0; i < 200; ++i) {
        const Point x = RandomPoint(rng, d);
        double s = 0.0;
        ForEachInBox(box.lo, box.hi, [&](const MultiIndex& nu) {
          s += ScaledTranslate(order, level, nu).Value(x.span());
        });
        pou = std::max(pou, std::abs(s - 1.0));
      }
    }
  }
  Record(out, "bspline", "partition_of_unity", pou, 1e-12);

  std::uniform_real_distribution<double> u(-1.0, 8.0);
  double refine = 0.0;
  for (int m = 0; m <= 6; ++m) {
    const auto a = RefinementCoefficients(m);
    for (int i = 0; i < 500; ++i) {
      const double x = u(rng);
      double s = 0.0;
      for (std::size_t mu = 0; mu < a.size(); ++mu) {
        s += boost::rational_cast<double>(a[mu]) * BSplineValue(m, 2 * x - double(mu));
      }
      refine = std::max(refine, std::abs(BSplineValue(m, x) - s));
    }
  }
  Record(out, "bspline", "refinement", refine, 1e-12);

  double fd = 0.0;
  const double h = 1e-5;
  for (int m = 1; m <= 6; ++m) {
    for (int r = 1; r <= m; ++r) {
      for (int i = 0; i < 200; ++i) {
        const double x = std::uniform_real_distribution<double>(0.0, m + 1.0)(rng);
        if (std::abs(x - std::round(x)) < 1e-3) continue;
        const double approx = (BSplineDerivative(m, r - 1, x + h) -
                               BSplineDerivative(m, r - 1, x - h)) / (2 * h);
        fd = std::max(fd, std::abs(approx - BSplineDerivative(m, r, x)));
      }
    }
  }
  Record(out, "bspline", "derivative_vs_finite_difference", fd, 1e-6);
}

void InterpSuite(Rng& rng, std::vector<DiagnosticResult>& out) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  double worst = 0.0;
  for (std::size_t d = 1; d <= 3; ++d) {
    for (int deg = 0; deg <= 3; ++deg) {
      const MultiIndex l(d, deg);
      std::vector<double> c(TensorNodeCount(l));
      for (double& v : c) v = coef(rng);
      auto poly = [&](std::span<const double> x) {
        double s = 0.0;
        std::size_t i = 0;
        ForEachInBox(MultiIndex(d, 0), l, [&](const MultiIndex& e) {
          double t = c[i++];
          for (std::size_t j = 0; j < d; ++j) t *= std::pow(x[j], e[j]);
          s += t;
        });
        return s;
      };
      double scale = 0.0;
      for (double v : c) scale += std::abs(v);
      const Box box{Point(d, 0.25), Point(d, 0.5)};
      const TensorPoly p = TensorInterpolateFunction(l, box, poly);
      for (int i = 0; i < 20; ++i) {
        const Point x = RandomPoint(rng, d);
        worst = std::max(worst, std::abs(p.Value(x.span()) - poly(x.span())) / scale);
      }
    }
  }
  Record(out, "interp", "polynomial_reproduction", worst, 1e-9);

  double kron = 0.0;
  for (int l = 0; l <= kMaxInterpDegree; ++l) {
    for (int i = 0; i <= l; ++i) {
      for (int k = 0; k <= l; ++k) {
        const double v = LagrangeBasis(l, i, Nodes(l)[k]);
        kron = std::max(kron, std::abs(v - (i == k ? 1.0 : 0.0)));
      }
    }
  }
  Record(out, "interp", "kronecker_property", kron, 1e-12);
}

void OperatorsSuite(Rng& rng, std::vector<DiagnosticResult>& out) {
  const TestFunction trig = FindTestFunction("trig", 2);
  const PointFunction f = trig.AsFunction();
  const MultiIndex l{2, 1};
  const MultiIndex m{1, 1};
  const MultiIndex zero{0, 0};

  auto poly = [](std::span<const double> x) {
    return 1.0 + x[0] - 2.0 * x[0] * x[0] * x[1] + 0.5 * x[1];
  };
  double annihilate = 0.0;
  double tele = 0.0;
  double urep = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Point x = RandomPoint(rng, 2);
    annihilate = std::max(
        annihilate,
        std::abs(BooleanDifferenceDerivative(poly, {1, 2}, l, m, zero, x.span())));
    const MultiIndex k{2, 1};
    double s = 0.0;
    ForEachInBox(zero, k, [&](const MultiIndex& kappa) {
      s += BooleanDifferenceDerivative(f, kappa, l, m, zero, x.span());
    });
    tele = std::max(tele, std::abs(s - QuasiInterpolantDerivative(
                                           f, k, l, m, zero, x.span())));
  }
  const MultiIndex kappa{2, 1};
  for (int i = 0; i < 10; ++i) {
    const Point x = RandomPoint(rng, 2);
    const ShiftBox box = ActiveTranslates(m, kappa);
    double s = 0.0;
    ForEachInBox(box.lo, box.hi, [&](const MultiIndex& nu) {
      const double g = ScaledTranslate(m, kappa, nu).Value(x.span());
      if (g != 0.0) {
        s += g * BooleanDifferenceLocalPolynomial(f, kappa, nu, l, m).Value(x.span());
      }
    });
    urep = std::max(urep, std::abs(s - BooleanDifferenceDerivative(
                                           f, kappa, l, m, zero, x.span())));
  }
  Record(out, "operators", "polynomial_annihilation", annihilate, 1e-9);
  Record(out, "operators", "telescoping", tele, 1e-9);
  Record(out, "operators", "u_representation", urep, 1e-9);

  EvalStats stats;
  const Point x = RandomPoint(rng, 2);
  QuasiInterpolantDerivative(f, {3, 3}, l, {2, 1}, zero, x.span(), &stats);
  Record(out, "operators", "locality_translates", double(stats.translates), 6.0);
}

void SparseGridSuite(Rng&, std::vector<DiagnosticResult>& out) {
  const Point e{1.0, 1.0};
  double tail_err = 0.0;
  for (int r = 1; r <= 8; ++r) {
    double brute = 0.0;
    for (int a = 0; a <= 40; ++a) {
      for (int b = 0; b <= 40; ++b) {
        if (a + b > r) brute += std::exp2(-(a + b));
      }
    }
    tail_err = std::max(tail_err, std::abs(brute - WeightedTailSum(e, e, r)));
  }
  Record(out, "sparse_grid", "tail_sum_vs_brute_force", tail_err, 1e-10);

  std::vector<double> head, head_model, tail, tail_model;
  for (int r = 4; r <= 14; ++r) {
    head.push_back(WeightedHeadSum(e, e, r));
    head_model.push_back(std::exp2(r) * r);
    tail.push_back(WeightedTailSum(e, e, r));
    tail_model.push_back(std::exp2(-r) * r);
  }
  Record(out, "sparse_grid", "head_sum_growth_factor",
         FactorGrowthResidual(head, head_model, 2), 4.0);
  Record(out, "sparse_grid", "tail_sum_growth_factor",
         FactorGrowthResidual(tail, tail_model, 2), 4.0);

  const SmoothnessParams params = DeriveParams(2, {2.0, 2.0}, 2, 2, kInfinity, {0, 0});
  std::vector<double> counts, model;
  for (int r = 1; r <= 11; ++r) {
    counts.push_back(double(PlanPointCount(params, r)));
    model.push_back(std::exp2(r) * r);
  }
  Record(out, "sparse_grid", "point_count_growth_factor",
         FactorGrowthResidual(counts, model, 5), 4.0);
}

void RecoverySuite(Rng& rng, std::vector<DiagnosticResult>& out) {
  const SmoothnessParams params = DeriveParams(2, {2.5, 2.5}, 2, 2, kInfinity, {1, 1});
  auto plan = std::make_shared<const RecoveryPlan>(BuildPlan(params, 3));
  auto f = [](std::span<const double> x) { return x[0] * x[0] * x[1] * x[1]; };
  const Approximant approx = Reconstruct(Sample(f, plan), {1, 1});
  double exact = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Point x = RandomPoint(rng, 2);
    exact = std::max(exact, std::abs(approx(x.span()) - 4.0 * x[0] * x[1]));
  }
  Record(out, "recovery", "polynomial_derivative_exactness", exact, 1e-8);

  std::normal_distribution<double> n01;
  std::vector<double> s1(plan->n_actual()), s2(plan->n_actual()), mix(plan->n_actual());
  const double a = 0.7, b = -1.3;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    s1[i] = n01(rng);
    s2[i] = n01(rng);
    mix[i] = a * s1[i] + b * s2[i];
  }
  const Approximant r1 = Reconstruct(SampleSet(plan, s1), {1, 1});
  const Approximant r2 = Reconstruct(SampleSet(plan, s2), {1, 1});
  const Approximant rm = Reconstruct(SampleSet(plan, mix), {1, 1});
  double lin = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Point x = RandomPoint(rng, 2);
    const double scale = 1.0 + std::abs(a * r1(x.span())) + std::abs(b * r2(x.span()));
    lin = std::max(lin, std::abs(rm(x.span()) - a * r1(x.span()) - b * r2(x.span())) / scale);
  }
  Record(out, "recovery", "linearity", lin, 1e-10);
}

void LabSuite(Rng& rng, std::vector<DiagnosticResult>& out) {
  double fd = 0.0;
  const double h = 1e-5;
  for (const TestFunction& fn : Registry(2)) {
    for (int i = 0; i < 100; ++i) {
      const Point x = RandomPoint(rng, 2);
      if (fn.KinkDistance(x.span()) < 0.05) continue;
      for (std::size_t j = 0; j < 2; ++j) {
        MultiIndex e(2, 0);
        e[j] = 1;
        Point xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const double approx = (fn.Value(xp.span()) - fn.Value(xm.span())) / (2 * h);
        const double exact = fn.Derivative(e, x.span());
        fd = std::max(fd, std::abs(approx - exact) / (1.0 + std::abs(exact)));
      }
    }
  }
  Record(out, "lab", "registry_derivatives", fd, 1e-5);

  const PointFunction trig = FindTestFunction("trig", 1).AsFunction();
  double prev = 0.0;
  double violation = 0.0;
  for (int k = 6; k >= 1; --k) {
    const double t = std::exp2(-k);
    const double est = ModulusEstimate(trig, 1, {2}, {t}, {0}, 2.0);
    violation = std::max(violation, prev - est);
    prev = est;
  }
  Record(out, "lab", "modulus_monotone_in_t", violation, 0.0);
}

const std::vector<Suite>& Suites() {
  static const std::vector<Suite> suites = {
      {"bspline", BSplineSuite},   {"interp", InterpSuite},
      {"operators", OperatorsSuite}, {"sparse_grid", SparseGridSuite},
      {"recovery", RecoverySuite}, {"lab", LabSuite},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& DiagnosticSuites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const Suite& s : Suites()) n.push_back(s.name);
    return n;
  }();
  return names;
}

std::vector<DiagnosticResult> RunDiagnostics(const std::string& selector,
                                             std::uint64_t seed) {
  std::vector<DiagnosticResult> out;
  bool matched = false;
  for (const Suite& s : Suites()) {
    if (selector != "all" && selector != s.name) continue;
    matched = true;
    Rng rng(seed);
    s.run(rng, out);
  }
  if (!matched) throw std::invalid_argument("unknown diagnostic suite '" + selector + "'");
  return out;
}

void WriteDiagnostics(std::ostream& os,
                      const std::vector<DiagnosticResult>& results) {
  char buf[128];
  for (const DiagnosticResult& r : results) {
    std::snprintf(buf, sizeof buf, "residual=%.6e\tlimit=%.6e", r.residual, r.limit);
    os << r.suite << '\t' << r.property << '\t' << (r.passed ? "PASS" : "FAIL")
       << '\t' << buf << '\n';
  }
}

}  // namespace mixrec::harness
