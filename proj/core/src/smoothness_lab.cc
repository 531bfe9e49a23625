#include "mixrec/smoothness_lab.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mixrec {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double Binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// sin(πt + 0.3)
Factor1D TrigFactor() {
  return {[](int k, double t) {
    const double phase = std::numbers::pi * t + 0.3 + k * std::numbers::pi / 2;
    return std::pow(std::numbers::pi, k) * std::sin(phase);
  }};
}

// |t - 1/2|^a
Factor1D PowerFactor(double a) {
  return {[a](int k, double t) {
            const double s = t - 0.5;
            double coef = 1.0;
            for (int i = 0; i < k; ++i) coef *= a - i;
            if (coef == 0.0) return 0.0;
            if (s == 0.0) return (a - k > 0.0) ? 0.0 : kNaN;
            const double sign = (s < 0 && k % 2 == 1) ? -1.0 : 1.0;
            return sign * coef * std::pow(std::abs(s), a - k);
          },
          0.5};
}

// t^2
Factor1D SquareFactor() {
  return {[](int k, double t) {
    switch (k) {
      case 0: return t * t;
      case 1: return 2.0 * t;
      case 2: return 2.0;
      default: return 0.0;
    }
  }};
}

}  // namespace

TestFunction::TestFunction(std::string id, std::vector<Factor1D> factors,
                           Point alpha, SmoothnessClass cls, double theta)
    : id_(std::move(id)),
      factors_(std::move(factors)),
      alpha_(alpha),
      class_(cls),
      theta_(theta) {
  if (alpha_.size() != factors_.size()) {
    throw std::invalid_argument("declared smoothness has wrong dimension");
  }
}

double TestFunction::Value(std::span<const double> x) const {
  double v = 1.0;
  for (std::size_t j = 0; j < factors_.size(); ++j) v *= factors_[j].deriv(0, x[j]);
  return v;
}

double TestFunction::Derivative(const MultiIndex& lambda,
                                std::span<const double> x) const {
  double v = 1.0;
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    v *= factors_[j].deriv(lambda[j], x[j]);
  }
  return v;
}

double TestFunction::KinkDistance(std::span<const double> x) const {
  double dist = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < factors_.size(); ++j) {
    if (!std::isnan(factors_[j].kink)) {
      dist = std::min(dist, std::abs(x[j] - factors_[j].kink));
    }
  }
  return dist;
}

PointFunction TestFunction::AsFunction() const {
  return [self = *this](std::span<const double> x) { return self.Value(x); };
}

PointFunction TestFunction::DerivativeFunction(const MultiIndex& lambda) const {
  return [self = *this, lambda](std::span<const double> x) {
    return self.Derivative(lambda, x);
  };
}

std::vector<TestFunction> Registry(std::size_t d) {
  if (d == 0 || d > kMaxDim) throw std::invalid_argument("bad dimension");
  std::vector<TestFunction> out;

  out.emplace_back("trig", std::vector<Factor1D>(d, TrigFactor()),
                   Point(d, kInfinity), SmoothnessClass::kHolder, kInfinity);
  // Exponent 0.75 lies in (1/2, 1): admissible for p = 2 with l(α) = 1.
  out.emplace_back("kink", std::vector<Factor1D>(d, PowerFactor(0.75)),
                   Point(d, 0.75), SmoothnessClass::kHolder, kInfinity);
  out.emplace_back("poly", std::vector<Factor1D>(d, SquareFactor()),
                   Point(d, kInfinity), SmoothnessClass::kHolder, kInfinity);
  if (d >= 2) {
    std::vector<Factor1D> mix(d, PowerFactor(0.75));
    mix[0] = TrigFactor();
    Point alpha(d, 0.75);
    alpha[0] = kInfinity;
    out.emplace_back("aniso-mix", std::move(mix), alpha,
                     SmoothnessClass::kHolder, kInfinity);

    // |t - 1/2|^a has L_2 smoothness a + 1/2 with θ = ∞: (2, 1.5, ...) for p = 2.
    std::vector<Factor1D> power(d, PowerFactor(1.0));
    power[0] = PowerFactor(1.5);
    Point palpha(d, 1.5);
    palpha[0] = 2.0;
    out.emplace_back("aniso-power", std::move(power), palpha,
                     SmoothnessClass::kHolder, kInfinity);
  }
  return out;
}

TestFunction FindTestFunction(const std::string& id, std::size_t d) {
  for (TestFunction& f : Registry(d)) {
    if (f.id() == id) return f;
  }
  throw std::invalid_argument("unknown test function '" + id +
                              "' for dimension " + std::to_string(d));
}

double MixedDifference(const PointFunction& f, const MixedDifferenceSpec& spec,
                       std::span<const double> x) {
  const std::size_t d = x.size();
  if (spec.order.size() != d || spec.step.size() != d) {
    throw std::invalid_argument("difference spec has wrong dimension");
  }
  MultiIndex active(d, 0);
  for (int j : spec.axes) {
    if (j < 0 || std::size_t(j) >= d) {
      throw std::invalid_argument("axis out of range");
    }
    active[j] = spec.order[j];
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double end = x[j] + active[j] * spec.step[j];
    constexpr double kSlack = 1e-12;
    if (x[j] < -kSlack || x[j] > 1.0 + kSlack || end < -kSlack ||
        end > 1.0 + kSlack) {
      throw std::invalid_argument("point outside the difference domain on axis " +
                                  std::to_string(j + 1));
    }
  }
  const int total = Sum(active);
  double s = 0.0;
  Point y(d);
  ForEachInBox(MultiIndex(d, 0), active, [&](const MultiIndex& k) {
    double c = ((total - Sum(k)) % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t j = 0; j < d; ++j) {
      c *= Binomial(active[j], k[j]);
      y[j] = x[j] + k[j] * spec.step[j];
    }
    s += c * f(y.span());
  });
  return s;
}

double ModulusEstimate(const PointFunction& f, std::size_t d,
                       const MultiIndex& order, const Point& t,
                       const std::vector<int>& axes, double p,
                       const ModulusGrid& grid) {
  const int res = grid.resolution;
  // Absolute step multipliers: every integer up to 32, then a geometric run.
  std::vector<int> candidates;
  for (int i = 1; i <= std::min(32, res); ++i) candidates.push_back(i);
  for (double v = 32.0 * 1.25; v <= res; v *= 1.25) {
    candidates.push_back(int(std::lround(v)));
  }

  // Per active axis, the admissible signed multipliers.
  std::vector<std::vector<int>> steps(d, std::vector<int>{0});
  for (int j : axes) {
    steps[j].clear();
    for (int c : candidates) {
      if (c <= t[j] * res + 1e-9) {
        steps[j].push_back(c);
        steps[j].push_back(-c);
      }
    }
    if (steps[j].empty()) return 0.0;
  }

  MultiIndex lo(d, 0), hi(d, 0);
  for (std::size_t j = 0; j < d; ++j) hi[j] = int(steps[j].size()) - 1;

  const double cell = std::pow(1.0 / res, double(d));
  double best = 0.0;
  ForEachInBox(lo, hi, [&](const MultiIndex& pick) {
    MixedDifferenceSpec spec{order, Point(d, 0.0), axes};
    MultiIndex glo(d, 0), ghi(d, res);
    for (std::size_t j = 0; j < d; ++j) {
      const int s = steps[j][pick[j]];
      spec.step[j] = double(s) / res;
      if (std::find(axes.begin(), axes.end(), int(j)) == axes.end()) continue;
      const int reach = order[j] * s;
      if (reach > 0) ghi[j] = res - reach;
      else glo[j] = -reach;
    }
    double acc = 0.0;
    Point x(d);
    ForEachInBox(glo, ghi, [&](const MultiIndex& g) {
      for (std::size_t j = 0; j < d; ++j) x[j] = double(g[j]) / res;
      const double v = std::abs(MixedDifference(f, spec, x.span()));
      if (std::isinf(p)) acc = std::max(acc, v);
      else acc += std::pow(v, p) * cell;
    });
    const double norm = std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
    best = std::max(best, norm);
  });
  return best;
}

}  // namespace mixrec
