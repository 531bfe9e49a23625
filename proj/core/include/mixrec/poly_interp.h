#ifndef MIXREC_POLY_INTERP_H_
#define MIXREC_POLY_INTERP_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "mixrec/multi_index.h"

namespace mixrec {

inline constexpr int kMaxInterpDegree = 12;

// Interpolation nodes are mapped Chebyshev–Gauss points
//   (1 - cos((2i+1)π / (2l+2))) / 2,  i = 0..l,
// rounded once to the grid 2^-kNodeBits so that sample locations on dyadic
// cells are exact dyadic rationals.
inline constexpr int kNodeBits = 40;

// Node i of degree l as an integer numerator over 2^kNodeBits.
std::int64_t NodeNumerator(int l, int i);

// The l+1 nodes of degree l, strictly increasing inside (0,1).
std::span<const double> Nodes(int l);

// i-th Lagrange basis polynomial for the degree-l nodes, evaluated at t.
double LagrangeBasis(int l, int i, double t);

// k-th derivative of the i-th Lagrange basis polynomial at t (local variable).
double LagrangeBasisDerivative(int l, int i, int k, double t);

// Fills out[i] = d^k/dt^k π_i(t) for i = 0..l in one pass.
void LagrangeBasisDerivatives(int l, int k, double t, std::span<double> out);

// Axis-parallel reference box x0 + δ[0,1]^d.
struct Box {
  Point origin;
  Point width;
};

// Number of tensor nodes for degree bound l: Π (l_j + 1).
std::int64_t TensorNodeCount(const MultiIndex& l);

// Node ξ_{δ,x0}^{d,l,λ} of the box.
Point TensorNode(const Box& box, const MultiIndex& l, const MultiIndex& lambda);

// Contracts a row-major tensor of coefficients against per-axis weight
// vectors: Σ_λ c[λ] Π_j w_j[λ_j]. weights[j] must hold l_j+1 entries.
double ContractTensor(const MultiIndex& l, std::span<const double> coeffs,
                      std::span<const double* const> weights);

// Polynomial of coordinate degree <= l stored by its values at the tensor
// nodes of a reference box (Lagrange coefficients).
class TensorPoly {
 public:
  TensorPoly(MultiIndex degree, Box box, std::vector<double> node_values);

  const MultiIndex& degree() const { return degree_; }
  const Box& box() const { return box_; }
  std::span<const double> node_values() const { return values_; }
  std::size_t dim() const { return degree_.size(); }

  double Value(std::span<const double> x) const;
  // D^λ P(x); zero as soon as some λ_j > l_j.
  double Derivative(const MultiIndex& lambda, std::span<const double> x) const;

 private:
  MultiIndex degree_;
  Box box_;
  std::vector<double> values_;
};

// Interpolant on `box` from node values listed in row-major λ order.
TensorPoly TensorInterpolate(const MultiIndex& l, const Box& box,
                             std::vector<double> node_values);

// Same, from an explicit λ -> value map. Every λ in Z_+^d(l) must be present
// and nothing else.
TensorPoly TensorInterpolate(const MultiIndex& l, const Box& box,
                             const std::map<MultiIndex, double>& values);

// Interpolant of a function on `box`: samples it at the tensor nodes.
template <typename Fn>
TensorPoly TensorInterpolateFunction(const MultiIndex& l, const Box& box,
                                     Fn&& f) {
  std::vector<double> values;
  values.reserve(TensorNodeCount(l));
  ForEachInBox(MultiIndex(l.size(), 0), l, [&](const MultiIndex& lambda) {
    const Point x = TensorNode(box, l, lambda);
    values.push_back(f(x.span()));
  });
  return TensorInterpolate(l, box, std::move(values));
}

}  // namespace mixrec

#endif  // MIXREC_POLY_INTERP_H_
