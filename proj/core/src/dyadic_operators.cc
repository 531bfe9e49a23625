#include "mixrec/dyadic_operators.h"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mixrec {
namespace {

// Above this many stored node values a level is considered unreasonable.
constexpr std::int64_t kMaxLevelValues = std::int64_t(1) << 27;

constexpr double kBelowOne = 1.0 - std::numeric_limits<double>::epsilon() / 2;

double Binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

void CheckLambda(const MultiIndex& lambda, const MultiIndex& order) {
  if (lambda.size() != order.size()) {
    throw std::invalid_argument("derivative order has wrong dimension");
  }
  for (std::size_t j = 0; j < order.size(); ++j) {
    if (lambda[j] < 0 || lambda[j] > order[j]) {
      throw std::invalid_argument("derivative order " + ToString(lambda) +
                                  " not within spline order " +
                                  ToString(order));
    }
  }
}

}  // namespace

Box CellBox(const MultiIndex& level, const MultiIndex& cell) {
  Box box{Point(level.size()), Point(level.size())};
  for (std::size_t j = 0; j < level.size(); ++j) {
    box.width[j] = std::ldexp(1.0, -level[j]);
    box.origin[j] = std::ldexp(double(cell[j]), -level[j]);
  }
  return box;
}

ShiftBox CellRange(const MultiIndex& level) {
  ShiftBox box{MultiIndex(level.size(), 0), MultiIndex(level.size())};
  for (std::size_t j = 0; j < level.size(); ++j) {
    if (level[j] < 0 || level[j] > 30) {
      throw std::invalid_argument("level " + ToString(level) +
                                  " outside supported range");
    }
    box.hi[j] = (1 << level[j]) - 1;
  }
  return box;
}

TensorPoly LocalInterpolant(const PointFunction& f, const MultiIndex& level,
                            const MultiIndex& cell, const MultiIndex& degree) {
  if (!CellRange(level).Contains(cell)) {
    throw std::invalid_argument("cell " + ToString(cell) +
                                " outside level " + ToString(level));
  }
  return TensorInterpolateFunction(degree, CellBox(level, cell), f);
}

LevelTerm::LevelTerm(MultiIndex level, MultiIndex degree, MultiIndex order,
                     CellSource source)
    : level_(level),
      degree_(degree),
      order_(order),
      cells_(CellRange(level)),
      nodes_per_cell_(TensorNodeCount(degree)),
      source_(std::move(source)) {
  if (degree_.size() != level_.size() || order_.size() != level_.size()) {
    throw std::invalid_argument("level, degree and order differ in dimension");
  }
  for (int m : order_) {
    if (m < 0 || m > kMaxSplineOrder) {
      throw std::invalid_argument("spline order " + ToString(order_) +
                                  " unsupported");
    }
  }
  const std::int64_t total = cells_.size() * nodes_per_cell_;
  if (total > kMaxLevelValues) {
    throw std::length_error("level " + ToString(level_) + " needs " +
                            std::to_string(total) + " node values");
  }
  values_.assign(total, 0.0);
  filled_.assign(cells_.size(), 0);
}

LevelTerm LevelTerm::FromFunction(const PointFunction& f, MultiIndex level,
                                  MultiIndex degree, MultiIndex order) {
  return LevelTerm(level, degree, order,
                   [f, level, degree](const MultiIndex& cell,
                                      std::span<double> out) {
                     const Box box = CellBox(level, cell);
                     std::size_t i = 0;
                     ForEachInBox(MultiIndex(degree.size(), 0), degree,
                                  [&](const MultiIndex& lambda) {
                                    out[i++] = f(TensorNode(box, degree, lambda)
                                                     .span());
                                  });
                   });
}

void LevelTerm::Materialize() {
  ForEachInBox(cells_.lo, cells_.hi,
               [&](const MultiIndex& cell) { CellValues(cell); });
}

std::span<const double> LevelTerm::CellValues(const MultiIndex& cell) const {
  const std::int64_t idx = BoxOffset(cells_.lo, cells_.hi, cell);
  std::span<double> slot(values_.data() + idx * nodes_per_cell_,
                         std::size_t(nodes_per_cell_));
  if (!filled_[idx]) {
    source_(cell, slot);
    filled_[idx] = 1;
  }
  return slot;
}

TensorPoly LevelTerm::CellPolynomial(const MultiIndex& cell) const {
  auto v = CellValues(cell);
  return TensorPoly(degree_, CellBox(level_, cell),
                    std::vector<double>(v.begin(), v.end()));
}

double LevelTerm::Derivative(const MultiIndex& lambda,
                             std::span<const double> x,
                             EvalStats* stats) const {
  CheckLambda(lambda, order_);
  const std::size_t d = level_.size();

  // Per axis and per covering shift ν_j ∈ [c_j - m_j, c_j], the weights
  //   2^{κ_j λ_j} Σ_μ C(λ_j, μ) π_i^{(λ_j-μ)}(t_j) ψ_{m_j}^{(μ)}(s_j)
  // so that the Leibniz sum factorizes into one tensor contraction.
  constexpr int kW = kMaxInterpDegree + 1;
  constexpr int kS = kMaxSplineOrder + 1;
  std::array<std::array<std::array<double, kW>, kS>, kMaxDim> weights;
  std::array<std::array<bool, kS>, kMaxDim> alive;
  MultiIndex cell(d);
  std::array<double, kW> basis;

  for (std::size_t j = 0; j < d; ++j) {
    const double xj = std::clamp(x[j], 0.0, kBelowOne);
    const double scaled = std::ldexp(xj, level_[j]);
    const int last = (1 << level_[j]) - 1;
    cell[j] = std::min(int(std::floor(scaled)), last);
    const int lj = degree_[j];
    for (int k = 0; k <= order_[j]; ++k) {
      const int nu = cell[j] - order_[j] + k;
      const int anchor = std::max(nu, 0);
      const double s = scaled - nu;
      const double t = scaled - anchor;
      auto& w = weights[j][k];
      std::fill_n(w.begin(), lj + 1, 0.0);
      bool any = false;
      for (int mu = 0; mu <= lambda[j]; ++mu) {
        const double psi = BSplineDerivative(order_[j], mu, s);
        if (psi == 0.0) continue;
        const int dp = lambda[j] - mu;
        if (dp > lj) continue;
        LagrangeBasisDerivatives(lj, dp, t, basis);
        const double c = Binomial(lambda[j], mu) * psi;
        for (int i = 0; i <= lj; ++i) w[i] += c * basis[i];
        any = true;
      }
      const double scale = std::ldexp(1.0, level_[j] * lambda[j]);
      for (int i = 0; i <= lj; ++i) w[i] *= scale;
      alive[j][k] = any;
    }
  }

  double sum = 0.0;
  MultiIndex kidx(d, 0);
  std::array<const double*, kMaxDim> ptrs;
  MultiIndex shift(d);
  ForEachInBox(MultiIndex(d, 0), order_, [&](const MultiIndex& k) {
    if (stats) ++stats->translates;
    for (std::size_t j = 0; j < d; ++j) {
      if (!alive[j][k[j]]) return;
    }
    for (std::size_t j = 0; j < d; ++j) {
      shift[j] = std::max(cell[j] - order_[j] + k[j], 0);
      ptrs[j] = weights[j][k[j]].data();
    }
    sum += ContractTensor(degree_, CellValues(shift), {ptrs.data(), d});
  });
  return sum;
}

double QuasiInterpolantDerivative(const PointFunction& f,
                                  const MultiIndex& level,
                                  const MultiIndex& degree,
                                  const MultiIndex& order,
                                  const MultiIndex& lambda,
                                  std::span<const double> x,
                                  EvalStats* stats) {
  LevelTerm term = LevelTerm::FromFunction(f, level, degree, order);
  return term.Derivative(lambda, x, stats);
}

double BooleanDifferenceDerivative(const PointFunction& f,
                                   const MultiIndex& level,
                                   const MultiIndex& degree,
                                   const MultiIndex& order,
                                   const MultiIndex& lambda,
                                   std::span<const double> x) {
  CheckLambda(lambda, order);
  double sum = 0.0;
  ForEachSubsetShift(level, [&](const MultiIndex& upsilon, int sign) {
    sum += sign * QuasiInterpolantDerivative(f, level - upsilon, degree, order,
                                             lambda, x);
  });
  return sum;
}

std::vector<MultiIndex> RefinementShifts(const MultiIndex& order,
                                         const MultiIndex& level,
                                         const MultiIndex& shift,
                                         const MultiIndex& upsilon) {
  const std::size_t d = order.size();
  MultiIndex lo(d), hi(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (upsilon[j] == 0) {
      lo[j] = hi[j] = shift[j];
      continue;
    }
    if (level[j] == 0) {
      throw std::invalid_argument("shift vector leaves the support of the level");
    }
    // ν - 2ρ ∈ [0, m+1]  ⇔  ρ ∈ [ceil((ν-m-1)/2), floor(ν/2)]
    const int coarse_hi = (1 << (level[j] - 1)) - 1;
    const int a = shift[j] - order[j] - 1;
    const int from = (a >= 0) ? (a + 1) / 2 : -((-a) / 2);
    const int to = (shift[j] >= 0) ? shift[j] / 2 : -((-shift[j] + 1) / 2);
    lo[j] = std::max(from, -order[j]);
    hi[j] = std::min(to, coarse_hi);
  }
  std::vector<MultiIndex> out;
  ForEachInBox(lo, hi, [&](const MultiIndex& rho) { out.push_back(rho); });
  return out;
}

TensorPoly BooleanDifferenceLocalPolynomial(const PointFunction& f,
                                            const MultiIndex& level,
                                            const MultiIndex& shift,
                                            const MultiIndex& degree,
                                            const MultiIndex& order) {
  const std::size_t d = level.size();
  if (!ActiveTranslates(order, level).Contains(shift)) {
    throw std::invalid_argument("shift " + ToString(shift) +
                                " is not an active translate");
  }
  const Box target = CellBox(level, PositivePart(shift));
  const MultiIndex zero(d, 0);
  std::vector<Point> nodes;
  ForEachInBox(zero, degree, [&](const MultiIndex& lambda) {
    nodes.push_back(TensorNode(target, degree, lambda));
  });
  std::vector<double> values(nodes.size(), 0.0);

  std::vector<std::vector<Rational>> coeffs(d);
  for (std::size_t j = 0; j < d; ++j) coeffs[j] = RefinementCoefficients(order[j]);

  ForEachSubsetShift(level, [&](const MultiIndex& upsilon, int sign) {
    const MultiIndex coarse = level - upsilon;
    for (const MultiIndex& rho : RefinementShifts(order, level, shift, upsilon)) {
      double weight = sign;
      for (std::size_t j = 0; j < d; ++j) {
        if (upsilon[j]) {
          weight *= boost::rational_cast<double>(
              coeffs[j][shift[j] - 2 * rho[j]]);
        }
      }
      const TensorPoly p =
          LocalInterpolant(f, coarse, PositivePart(rho), degree);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        values[i] += weight * p.Value(nodes[i].span());
      }
    }
  });
  return TensorPoly(degree, target, std::move(values));
}

}  // namespace mixrec
