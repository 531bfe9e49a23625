#ifndef MIXREC_SMOOTHNESS_LAB_H_
#define MIXREC_SMOOTHNESS_LAB_H_

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mixrec/dyadic_operators.h"
#include "mixrec/multi_index.h"
#include "mixrec/sparse_grid.h"

namespace mixrec {

enum class SmoothnessClass { kHolder, kBesov };

// One-dimensional factor t -> φ(t) with its derivatives: deriv(k, t) = φ^{(k)}(t).
struct Factor1D {
  std::function<double(int, double)> deriv;
  // Location of a singularity of some derivative, NaN if none.
  double kink = std::numeric_limits<double>::quiet_NaN();
};

// Tensor-product test function f(x) = Π_j φ_j(x_j) with analytic mixed
// derivatives and a declared (lower bound on the) smoothness per axis.
class TestFunction {
 public:
  TestFunction(std::string id, std::vector<Factor1D> factors, Point alpha,
               SmoothnessClass cls, double theta);

  const std::string& id() const { return id_; }
  std::size_t dim() const { return factors_.size(); }
  const Point& alpha() const { return alpha_; }
  SmoothnessClass smoothness_class() const { return class_; }
  double theta() const { return theta_; }

  double Value(std::span<const double> x) const;
  // D^λ f(x); NaN where the derivative is singular.
  double Derivative(const MultiIndex& lambda, std::span<const double> x) const;
  // Distance from x to the nearest declared kink hyperplane (inf if none).
  double KinkDistance(std::span<const double> x) const;

  PointFunction AsFunction() const;
  PointFunction DerivativeFunction(const MultiIndex& lambda) const;

 private:
  std::string id_;
  std::vector<Factor1D> factors_;
  Point alpha_;
  SmoothnessClass class_;
  double theta_;
};

// Stable identifiers: "trig", "kink", "poly", and for d >= 2 "aniso-mix"
// and "aniso-power".
std::vector<TestFunction> Registry(std::size_t d);

// Throws std::invalid_argument for unknown identifiers.
TestFunction FindTestFunction(const std::string& id, std::size_t d);

struct MixedDifferenceSpec {
  MultiIndex order;           // l
  Point step;                 // h
  std::vector<int> axes;      // J, 0-based
};

// (Δ_h^{lχ_J} f)(x) = Σ_{k ≤ lχ_J} (-1)^{|lχ_J - k|} C(l,k) f(x + k h).
// Rejects x outside D_h^l, i.e. when x or x + l h leaves the closed cube on
// an active axis.
double MixedDifference(const PointFunction& f, const MixedDifferenceSpec& spec,
                       std::span<const double> x);

struct ModulusGrid {
  // Uniform grid of resolution+1 points per axis; steps are multiples of
  // 1/resolution.
  int resolution = 64;
};

// Lower estimate of the mixed modulus Ω^{lχ_J}(f, t)_{L_p}: the largest
// discrete L_p norm of Δ_h^{lχ_J} f over a fixed absolute lattice of steps
// with |h_j| <= t_j. Larger t sees a superset of steps.
double ModulusEstimate(const PointFunction& f, std::size_t d,
                       const MultiIndex& order, const Point& t,
                       const std::vector<int>& axes, double p,
                       const ModulusGrid& grid = {});

}  // namespace mixrec

#endif  // MIXREC_SMOOTHNESS_LAB_H_
