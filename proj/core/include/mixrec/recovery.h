#ifndef MIXREC_RECOVERY_H_
#define MIXREC_RECOVERY_H_

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "mixrec/dyadic_operators.h"
#include "mixrec/sparse_grid.h"

namespace mixrec {

// Function values at the points of a plan, aligned with plan.points.
class SampleSet {
 public:
  SampleSet(std::shared_ptr<const RecoveryPlan> plan,
            std::vector<double> values);

  const RecoveryPlan& plan() const { return *plan_; }
  std::shared_ptr<const RecoveryPlan> plan_ptr() const { return plan_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::shared_ptr<const RecoveryPlan> plan_;
  std::vector<double> values_;
};

// Thrown when the sampled function fails or returns a non-finite value.
class SampleError : public std::runtime_error {
 public:
  SampleError(const std::string& what, Point where)
      : std::runtime_error(what), point_(where) {}
  const Point& point() const { return point_; }

 private:
  Point point_;
};

// Evaluates f once at every merged plan point.
SampleSet Sample(const PointFunction& f,
                 std::shared_ptr<const RecoveryPlan> plan);

// The reconstruction Σ_{(κ,β) <= r} D^λ ℛ_κ^{d,l-e,m} f built from samples
// only. Linear in the samples; evaluation is read-only and thread-safe.
class Approximant {
 public:
  Approximant(const SampleSet& samples, MultiIndex lambda);

  const RecoveryPlan& plan() const { return *plan_; }
  const MultiIndex& lambda() const { return lambda_; }

  // Σ_κ D^λ ℛ_κ at x, evaluated through the combination coefficients
  //   c_κ = Σ_{υ ∈ {0,1}^d : κ+υ in the index set} (-1)^{|υ|}
  // so that each level term is visited once.
  double operator()(std::span<const double> x) const;

  // Same value, summing the Boolean differences level by level.
  double EvaluateByBooleanDifferences(std::span<const double> x) const;

  // D^λ ℛ_κ at x for one level of the index set.
  double LevelContribution(std::size_t level_index,
                           std::span<const double> x) const;

  // Levels with a nonzero combination coefficient.
  std::size_t ActiveLevelCount() const { return active_.size(); }
  int CombinationCoefficient(std::size_t level_index) const {
    return coefficient_[level_index];
  }

 private:
  std::shared_ptr<const RecoveryPlan> plan_;
  MultiIndex lambda_;
  std::vector<LevelTerm> terms_;
  std::vector<int> coefficient_;
  std::vector<std::size_t> active_;
  // For each level, indices (into terms_) and signs of its Boolean difference.
  std::vector<std::vector<std::pair<std::size_t, int>>> difference_terms_;
};

// Reconstructs D^λ f from samples with spline order m = λ. Rejects λ with a
// component above the spline order cap or above the interpolation degree
// range permitted by the plan parameters.
Approximant Reconstruct(const SampleSet& samples, const MultiIndex& lambda);

struct QuadratureSpec {
  // 2^cells_exponent cells per axis; negative selects ceil(12 / d).
  int cells_exponent = -1;
  // Gauss–Legendre points per axis per cell.
  int points = 4;
  // Uniform grid points per axis for q = inf; 0 selects 2^10+1 for d <= 2
  // and 2^6+1 otherwise.
  int sup_grid = 0;
  // Optional per-axis lower bounds on the cell exponent; empty for none.
  MultiIndex min_axis_exponent;
};

// Raises the per-axis cell exponents to the finest level of the plan so that
// every quadrature cell lies inside one cell of every level term.
QuadratureSpec ResolveForPlan(QuadratureSpec spec, const RecoveryPlan& plan);

// Gauss–Legendre nodes on [-1,1] (ascending) and weights.
void GaussLegendre(int k, std::vector<double>& nodes,
                   std::vector<double>& weights);

// ‖g - h‖_{L_q((0,1)^d)}: composite tensor Gauss–Legendre for finite q,
// maximum over a uniform grid plus the quadrature nodes for q = inf. Per-cell
// partial sums are combined by pairwise reduction in a fixed order.
double LqError(const PointFunction& g, const PointFunction& h, double q,
               std::size_t d, const QuadratureSpec& spec = {});

// Resolved cell exponent and sup-grid size for a dimension. The per-axis
// form also applies min_axis_exponent.
int ResolvedCellsExponent(const QuadratureSpec& spec, std::size_t d);
MultiIndex ResolvedAxisExponents(const QuadratureSpec& spec, std::size_t d);
int ResolvedSupGrid(const QuadratureSpec& spec, std::size_t d);

}  // namespace mixrec

#endif  // MIXREC_RECOVERY_H_
