#ifndef MIXREC_DYADIC_OPERATORS_H_
#define MIXREC_DYADIC_OPERATORS_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mixrec/bspline.h"
#include "mixrec/multi_index.h"
#include "mixrec/poly_interp.h"

namespace mixrec {

// A function on the closed unit cube, evaluated pointwise.
using PointFunction = std::function<double(std::span<const double>)>;

// Q_{κ,ν} = 2^{-κ}ν + 2^{-κ}[0,1]^d.
Box CellBox(const MultiIndex& level, const MultiIndex& cell);

// Cells 0 <= ν <= 2^κ - e of level κ.
ShiftBox CellRange(const MultiIndex& level);

// Local interpolant of f on the cell Q_{κ,ν}, degree bound l.
TensorPoly LocalInterpolant(const PointFunction& f, const MultiIndex& level,
                            const MultiIndex& cell, const MultiIndex& degree);

struct EvalStats {
  std::int64_t translates = 0;
};

// One level of the quasi-interpolant
//   R_κ f = Σ_{ν ∈ [-m, 2^κ-e]} (local interpolant on cell ν_+) · g_{κ,ν}.
// Cell polynomials come from a CellSource, are computed on first use and kept.
// Lazy filling is not thread-safe; call Materialize() before sharing the term
// across threads.
class LevelTerm {
 public:
  // Writes the node values (row-major over Z_+^d(l)) of the local interpolant
  // on the given cell.
  using CellSource =
      std::function<void(const MultiIndex& cell, std::span<double> values)>;

  LevelTerm(MultiIndex level, MultiIndex degree, MultiIndex order,
            CellSource source);

  // Cell values drawn from f at the tensor nodes of each cell.
  static LevelTerm FromFunction(const PointFunction& f, MultiIndex level,
                                MultiIndex degree, MultiIndex order);

  const MultiIndex& level() const { return level_; }
  const MultiIndex& degree() const { return degree_; }
  const MultiIndex& order() const { return order_; }

  void Materialize();

  // D^λ(R_κ f)(x) by the Leibniz rule, summing only translates that cover x.
  // Points on the upper face x_j = 1 take the left-hand limit. Rejects
  // λ_j > m_j.
  double Derivative(const MultiIndex& lambda, std::span<const double> x,
                    EvalStats* stats = nullptr) const;

  TensorPoly CellPolynomial(const MultiIndex& cell) const;

 private:
  std::span<const double> CellValues(const MultiIndex& cell) const;

  MultiIndex level_;
  MultiIndex degree_;
  MultiIndex order_;
  ShiftBox cells_;
  std::int64_t nodes_per_cell_;
  CellSource source_;
  mutable std::vector<double> values_;
  mutable std::vector<char> filled_;
};

// D^λ (R_κ^{d,l,m} f)(x).
double QuasiInterpolantDerivative(const PointFunction& f,
                                  const MultiIndex& level,
                                  const MultiIndex& degree,
                                  const MultiIndex& order,
                                  const MultiIndex& lambda,
                                  std::span<const double> x,
                                  EvalStats* stats = nullptr);

// D^λ (ℛ_κ f)(x) with ℛ_κ = Σ_{υ ∈ {0,1}^d, supp υ ⊂ supp κ} (-1)^{|υ|} R_{κ-υ}.
double BooleanDifferenceDerivative(const PointFunction& f,
                                   const MultiIndex& level,
                                   const MultiIndex& degree,
                                   const MultiIndex& order,
                                   const MultiIndex& lambda,
                                   std::span<const double> x);

// Coarse shifts ρ that contribute to the fine translate g_{κ,ν} when
// R_{κ-υ} is rewritten on level κ through the two-scale relation:
//   ρ_j = ν_j off supp υ;  ν_j - 2ρ_j ∈ [0, m_j+1] on supp υ;
//   -m <= ρ <= 2^{κ-υ} - e.
std::vector<MultiIndex> RefinementShifts(const MultiIndex& order,
                                         const MultiIndex& level,
                                         const MultiIndex& shift,
                                         const MultiIndex& upsilon);

// The polynomial 𝒰_{κ,ν} f such that ℛ_κ f = Σ_ν g_{κ,ν} · 𝒰_{κ,ν} f on the
// cube. Returned in Lagrange form on the cell (κ, ν_+).
TensorPoly BooleanDifferenceLocalPolynomial(const PointFunction& f,
                                            const MultiIndex& level,
                                            const MultiIndex& shift,
                                            const MultiIndex& degree,
                                            const MultiIndex& order);

}  // namespace mixrec

#endif  // MIXREC_DYADIC_OPERATORS_H_
