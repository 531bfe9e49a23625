#ifndef MIXREC_SPARSE_GRID_H_
#define MIXREC_SPARSE_GRID_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixrec/multi_index.h"

namespace mixrec {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Raised for parameter sets that violate the admissibility conditions.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Smoothness and accuracy parameters of a recovery problem together with the
// quantities derived from them.
struct SmoothnessParams {
  std::size_t d = 0;
  Point alpha;
  double p = 2.0;
  double q = 2.0;
  double theta = kInfinity;
  MultiIndex lambda;

  // l_j = min{k ∈ N : α_j < k}.
  MultiIndex l;
  // γ_j = α_j - λ_j - (1/p - 1/q)_+.
  Point gamma;
  double mn = 0.0;
  int cmn = 0;
  // Axes attaining mn (0-based).
  std::vector<int> critical_axes;
  // β_j = 1 on the critical axes, sqrt(γ_j / mn) elsewhere.
  Point beta;

  // Interpolation degree of the local polynomials, l - e.
  MultiIndex InterpDegree() const;
  // Spline order of the partition of unity, m = λ.
  MultiIndex SplineOrder() const { return lambda; }
  // Exponent of the logarithmic factor in the error bound,
  // (mn + 1 - 1/max(p,θ)) (cmn - 1).
  double LogExponent() const;
};

// Validates (d, α, p, q, θ, λ) and fills the derived fields. Throws
// ValidationError naming the failing axis when α_j - 1/p <= 0 or γ_j <= 0.
SmoothnessParams DeriveParams(std::size_t d, const Point& alpha, double p,
                              double q, double theta, const MultiIndex& lambda);

// {κ ∈ Z_+^d : (κ, β) <= r}, in depth-first lexicographic order. Every
// returned set is downward closed.
std::vector<MultiIndex> HyperbolicIndexSet(const Point& beta, double r);

// Σ_{κ : (κ,β) <= r} 2^{(κ,α)}.
double WeightedHeadSum(const Point& alpha, const Point& beta, double r);

// Σ_{κ : (κ,β) > r} 2^{-(κ,α)}, summed exactly through geometric closed forms
// on the unbounded directions; requires α > 0.
double WeightedTailSum(const Point& alpha, const Point& beta, double r);

// Exact coordinate numerator / 2^exponent, kept in lowest terms.
struct DyadicRational {
  std::uint64_t numerator = 0;
  int exponent = 0;

  static DyadicRational Make(std::uint64_t numerator, int exponent);
  double ToDouble() const;
  std::string ToString() const;  // "p/2^s"
  friend bool operator==(const DyadicRational&, const DyadicRational&) = default;
  friend auto operator<=>(const DyadicRational&, const DyadicRational&) = default;
};

using DyadicPoint = DimArray<DyadicRational>;

struct DyadicPointHash {
  std::size_t operator()(const DyadicPoint& p) const;
};

// Provenance of a sample point: level κ, cell ν, node index ρ.
struct PointTag {
  MultiIndex level;
  MultiIndex cell;
  MultiIndex node;
};

struct RecoveryPlan {
  SmoothnessParams params;
  int r = 0;
  MultiIndex degree;  // l - e
  std::vector<MultiIndex> levels;
  // For level i, node_points[level_offset[i] + cell_offset * nodes + node]
  // is the index of the stored point.
  std::vector<std::int64_t> level_offset;
  std::vector<std::int64_t> node_points;
  std::vector<DyadicPoint> points;
  std::vector<PointTag> tags;  // first tag that produced each point
  std::int64_t raw_count = 0;  // before merging equal points

  std::int64_t n_actual() const { return std::int64_t(points.size()); }
  std::int64_t nodes_per_cell() const;
  Point PointCoordinates(std::int64_t i) const;
};

// All tensor nodes of all cells of all levels in the hyperbolic index set,
// merged by exact equality of their dyadic coordinates. Throws
// std::overflow_error when a coordinate no longer fits the exact format.
RecoveryPlan BuildPlan(const SmoothnessParams& params, int r);

// Merged point count of BuildPlan(params, r).
std::int64_t PlanPointCount(const SmoothnessParams& params, int r);

// Largest r >= 1 whose plan has at most n points. Throws ValidationError when
// even r = 1 needs more than n points.
int ChooseLevel(const SmoothnessParams& params, std::int64_t n);

// Line format, one point per line:
//   κ TAB ν TAB ρ TAB x_1,...,x_d
// with vectors comma-separated and coordinates as p/2^s fractions. A leading
// '#' line carries the plan summary.
void WritePlan(std::ostream& os, const RecoveryPlan& plan);

struct PlanLine {
  PointTag tag;
  DyadicPoint coordinates;
};
std::vector<PlanLine> ReadPlan(std::istream& is);

}  // namespace mixrec

#endif  // MIXREC_SPARSE_GRID_H_
