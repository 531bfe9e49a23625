#ifndef MIXREC_BSPLINE_H_
#define MIXREC_BSPLINE_H_

#include <cstdint>
#include <span>
#include <vector>

#include <boost/rational.hpp>

#include "mixrec/multi_index.h"

namespace mixrec {

using Rational = boost::rational<std::int64_t>;

// Largest B-spline degree per axis for which piece tables are built.
inline constexpr int kMaxSplineOrder = 10;

// Cardinal B-spline of degree m: the (m+1)-fold convolution of the indicator
// of [0,1), supported on [0, m+1]. Pieces are half-open: on [k, k+1) the
// value is the k-th polynomial piece, so breakpoints take right-hand limits.
double BSplineValue(int m, double x);

// r-th derivative, 0 <= r <= m, via
//   psi_m^{(r)}(x) = sum_i (-1)^i C(r,i) psi_{m-r}(x - i).
// Throws std::invalid_argument when r > m.
double BSplineDerivative(int m, int r, double x);

// Coefficients of the k-th piece of psi_m in the local variable t = x - k,
// lowest power first. Exact.
const std::vector<Rational>& BSplinePiece(int m, int k);

// Two-scale coefficients a_mu = 2^{-m} C(m+1, mu), mu = 0..m+1.
std::vector<Rational> RefinementCoefficients(int m);

// g_{κ,ν}(x) = ψ^{d,m}(2^κ x - ν).
class ScaledTranslate {
 public:
  ScaledTranslate(MultiIndex order, MultiIndex level, MultiIndex shift);

  const MultiIndex& order() const { return order_; }
  const MultiIndex& level() const { return level_; }
  const MultiIndex& shift() const { return shift_; }
  std::size_t dim() const { return order_.size(); }

  // D^λ g(x) = Π_j 2^{κ_j λ_j} ψ_{m_j}^{(λ_j)}(2^{κ_j} x_j - ν_j).
  // Rejects λ_j > m_j.
  double Derivative(const MultiIndex& lambda, std::span<const double> x) const;
  double Value(std::span<const double> x) const;

  // Closed support 2^{-κ}ν + 2^{-κ}(m+e)[0,1]^d as per-axis [lo, hi].
  void Support(Point& lo, Point& hi) const;

 private:
  MultiIndex order_;
  MultiIndex level_;
  MultiIndex shift_;
};

// Shifts ν with supp g_{κ,ν} ∩ (0,1)^d nonempty: the box -m <= ν <= 2^κ - e,
// returned as its two corners.
struct ShiftBox {
  MultiIndex lo;
  MultiIndex hi;

  std::int64_t size() const { return BoxCardinality(lo, hi); }
  bool Contains(const MultiIndex& v) const {
    return LessEqual(lo, v) && LessEqual(v, hi);
  }
};

ShiftBox ActiveTranslates(const MultiIndex& order, const MultiIndex& level);

// Shifts whose support meets the dyadic cell Q_{κ,ν'}: ν' + [-m, 0].
ShiftBox CoveringTranslates(const MultiIndex& order, const MultiIndex& cell);

}  // namespace mixrec

#endif  // MIXREC_BSPLINE_H_
