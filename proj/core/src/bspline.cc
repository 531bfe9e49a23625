#include "mixrec/bspline.h"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mixrec {
namespace {

using Piece = std::vector<Rational>;

// ∫_0^t p(u) du
Piece IntegrateFromZero(const Piece& p) {
  Piece out(p.size() + 1, Rational(0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i + 1] = p[i] / Rational(std::int64_t(i + 1));
  }
  return out;
}

// ∫_t^1 p(u) du = P(1) - P(t) with P the antiderivative vanishing at 0.
Piece IntegrateToOne(const Piece& p) {
  Piece anti = IntegrateFromZero(p);
  Rational at_one(0);
  for (const Rational& c : anti) at_one += c;
  for (Rational& c : anti) c = -c;
  anti[0] += at_one;
  return anti;
}

struct PieceTable {
  // pieces[m][k] for k = 0..m
  std::array<std::vector<Piece>, kMaxSplineOrder + 1> pieces;
  // Same, converted to double for Horner evaluation.
  std::array<std::vector<std::vector<double>>, kMaxSplineOrder + 1> numeric;

  PieceTable() {
    pieces[0] = {Piece{Rational(1)}};
    for (int m = 1; m <= kMaxSplineOrder; ++m) {
      // ψ_m(k + t) = ∫_t^1 p_{k-1}(u) du + ∫_0^t p_k(u) du
      const auto& prev = pieces[m - 1];
      auto& cur = pieces[m];
      cur.assign(m + 1, Piece(m + 1, Rational(0)));
      for (int k = 0; k <= m; ++k) {
        if (k - 1 >= 0) {
          Piece left = IntegrateToOne(prev[k - 1]);
          for (std::size_t i = 0; i < left.size(); ++i) cur[k][i] += left[i];
        }
        if (k <= m - 1) {
          Piece right = IntegrateFromZero(prev[k]);
          for (std::size_t i = 0; i < right.size(); ++i) cur[k][i] += right[i];
        }
      }
    }
    for (int m = 0; m <= kMaxSplineOrder; ++m) {
      numeric[m].resize(pieces[m].size());
      for (std::size_t k = 0; k < pieces[m].size(); ++k) {
        for (const Rational& c : pieces[m][k]) {
          numeric[m][k].push_back(boost::rational_cast<double>(c));
        }
      }
    }
  }
};

const PieceTable& Table() {
  static const PieceTable table;
  return table;
}

void CheckOrder(int m) {
  if (m < 0 || m > kMaxSplineOrder) {
    throw std::invalid_argument("B-spline order " + std::to_string(m) +
                                " outside [0, " +
                                std::to_string(kMaxSplineOrder) + "]");
  }
}

std::int64_t Binomial(int n, int k) {
  std::int64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

double BSplineValue(int m, double x) {
  CheckOrder(m);
  if (!(x >= 0.0) || x >= double(m + 1)) return 0.0;
  const double fk = std::floor(x);
  const int k = int(fk);
  const double t = x - fk;
  const auto& c = Table().numeric[m][k];
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i];
  return v;
}

double BSplineDerivative(int m, int r, double x) {
  CheckOrder(m);
  if (r < 0 || r > m) {
    throw std::invalid_argument("derivative order " + std::to_string(r) +
                                " exceeds B-spline order " + std::to_string(m));
  }
  if (r == 0) return BSplineValue(m, x);
  double s = 0.0;
  for (int i = 0; i <= r; ++i) {
    const double term = double(Binomial(r, i)) * BSplineValue(m - r, x - i);
    s += (i % 2 == 0) ? term : -term;
  }
  return s;
}

const std::vector<Rational>& BSplinePiece(int m, int k) {
  CheckOrder(m);
  if (k < 0 || k > m) throw std::out_of_range("B-spline piece index");
  return Table().pieces[m][k];
}

std::vector<Rational> RefinementCoefficients(int m) {
  if (m < 0) throw std::invalid_argument("negative B-spline order");
  std::vector<Rational> a;
  a.reserve(m + 2);
  const std::int64_t scale = std::int64_t(1) << m;
  for (int mu = 0; mu <= m + 1; ++mu) {
    a.emplace_back(Binomial(m + 1, mu), scale);
  }
  return a;
}

ScaledTranslate::ScaledTranslate(MultiIndex order, MultiIndex level,
                                 MultiIndex shift)
    : order_(order), level_(level), shift_(shift) {
  if (order_.size() != level_.size() || order_.size() != shift_.size()) {
    throw std::invalid_argument("translate components differ in dimension");
  }
  for (int m : order_) CheckOrder(m);
}

double ScaledTranslate::Derivative(const MultiIndex& lambda,
                                   std::span<const double> x) const {
  double v = 1.0;
  for (std::size_t j = 0; j < dim(); ++j) {
    if (lambda[j] > order_[j]) {
      throw std::invalid_argument("derivative order exceeds spline order on axis " +
                                  std::to_string(j));
    }
    const double arg = std::ldexp(x[j], level_[j]) - shift_[j];
    v *= std::ldexp(BSplineDerivative(order_[j], lambda[j], arg),
                    level_[j] * lambda[j]);
    if (v == 0.0) return 0.0;
  }
  return v;
}

double ScaledTranslate::Value(std::span<const double> x) const {
  return Derivative(MultiIndex(dim(), 0), x);
}

void ScaledTranslate::Support(Point& lo, Point& hi) const {
  lo = Point(dim());
  hi = Point(dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    lo[j] = std::ldexp(double(shift_[j]), -level_[j]);
    hi[j] = std::ldexp(double(shift_[j] + order_[j] + 1), -level_[j]);
  }
}

ShiftBox ActiveTranslates(const MultiIndex& order, const MultiIndex& level) {
  ShiftBox box{MultiIndex(order.size()), MultiIndex(order.size())};
  for (std::size_t j = 0; j < order.size(); ++j) {
    box.lo[j] = -order[j];
    box.hi[j] = (1 << level[j]) - 1;
  }
  return box;
}

ShiftBox CoveringTranslates(const MultiIndex& order, const MultiIndex& cell) {
  return {cell - order, cell};
}

}  // namespace mixrec
