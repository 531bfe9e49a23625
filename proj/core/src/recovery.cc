#include "mixrec/recovery.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include <boost/math/special_functions/legendre.hpp>

namespace mixrec {
namespace {

double PairwiseSum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return PairwiseSum(v.first(half)) + PairwiseSum(v.subspan(half));
}

std::string Describe(const Point& x) {
  std::string s = "(";
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j) s += ", ";
    s += std::to_string(x[j]);
  }
  return s + ")";
}

}  // namespace

SampleSet::SampleSet(std::shared_ptr<const RecoveryPlan> plan,
                     std::vector<double> values)
    : plan_(std::move(plan)), values_(std::move(values)) {
  if (!plan_) throw std::invalid_argument("sample set needs a plan");
  if (std::int64_t(values_.size()) != plan_->n_actual()) {
    throw std::invalid_argument("sample count " +
                                std::to_string(values_.size()) +
                                " does not match plan size " +
                                std::to_string(plan_->n_actual()));
  }
}

SampleSet Sample(const PointFunction& f,
                 std::shared_ptr<const RecoveryPlan> plan) {
  std::vector<double> values;
  values.reserve(plan->points.size());
  for (std::int64_t i = 0; i < plan->n_actual(); ++i) {
    const Point x = plan->PointCoordinates(i);
    double v;
    try {
      v = f(x.span());
    } catch (const std::exception& e) {
      throw SampleError("evaluation failed at " + Describe(x) + ": " + e.what(),
                        x);
    }
    if (!std::isfinite(v)) {
      throw SampleError("non-finite value at " + Describe(x), x);
    }
    values.push_back(v);
  }
  return SampleSet(std::move(plan), std::move(values));
}

Approximant::Approximant(const SampleSet& samples, MultiIndex lambda)
    : plan_(samples.plan_ptr()), lambda_(lambda) {
  const RecoveryPlan& plan = *plan_;
  const std::size_t d = plan.params.d;
  if (lambda_.size() != d) {
    throw std::invalid_argument("derivative order has wrong dimension");
  }
  for (int v : lambda_) {
    if (v < 0 || v > kMaxSplineOrder) {
      throw std::invalid_argument("derivative order " + ToString(lambda_) +
                                  " unsupported");
    }
  }
  auto values = std::make_shared<std::vector<double>>(samples.values().begin(),
                                                      samples.values().end());
  const std::int64_t nodes = plan.nodes_per_cell();
  std::unordered_map<MultiIndex, std::size_t, MultiIndexHash> where;
  terms_.reserve(plan.levels.size());
  for (std::size_t i = 0; i < plan.levels.size(); ++i) {
    const MultiIndex& kappa = plan.levels[i];
    where.emplace(kappa, i);
    const ShiftBox cells = CellRange(kappa);
    const std::int64_t base = plan.level_offset[i];
    auto source = [plan_ref = plan_, values, cells, base, nodes](
                      const MultiIndex& cell, std::span<double> out) {
      const std::int64_t start = base + BoxOffset(cells.lo, cells.hi, cell) * nodes;
      for (std::int64_t k = 0; k < nodes; ++k) {
        out[k] = (*values)[plan_ref->node_points[start + k]];
      }
    };
    terms_.emplace_back(kappa, plan.degree, lambda_, std::move(source));
    terms_.back().Materialize();
  }

  coefficient_.assign(plan.levels.size(), 0);
  difference_terms_.resize(plan.levels.size());
  const MultiIndex zero(d, 0);
  const MultiIndex ones(d, 1);
  for (std::size_t i = 0; i < plan.levels.size(); ++i) {
    const MultiIndex& kappa = plan.levels[i];
    ForEachInBox(zero, ones, [&](const MultiIndex& upsilon) {
      auto it = where.find(kappa + upsilon);
      if (it != where.end()) {
        coefficient_[i] += (Sum(upsilon) % 2 == 0) ? 1 : -1;
      }
    });
    if (coefficient_[i] != 0) active_.push_back(i);
    ForEachSubsetShift(kappa, [&](const MultiIndex& upsilon, int sign) {
      auto it = where.find(kappa - upsilon);
      if (it == where.end()) {
        throw std::logic_error("index set is not downward closed");
      }
      difference_terms_[i].emplace_back(it->second, sign);
    });
  }
}

double Approximant::operator()(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i : active_) {
    s += coefficient_[i] * terms_[i].Derivative(lambda_, x);
  }
  return s;
}

double Approximant::LevelContribution(std::size_t level_index,
                                      std::span<const double> x) const {
  double s = 0.0;
  for (const auto& [idx, sign] : difference_terms_.at(level_index)) {
    s += sign * terms_[idx].Derivative(lambda_, x);
  }
  return s;
}

double Approximant::EvaluateByBooleanDifferences(
    std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < terms_.size(); ++i) s += LevelContribution(i, x);
  return s;
}

Approximant Reconstruct(const SampleSet& samples, const MultiIndex& lambda) {
  return Approximant(samples, lambda);
}

void GaussLegendre(int k, std::vector<double>& nodes,
                   std::vector<double>& weights) {
  if (k < 1) throw std::invalid_argument("need at least one Gauss point");
  nodes.clear();
  weights.clear();
  // Nonnegative zeros of P_k in ascending order.
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(k);
  auto weight = [k](double x) {
    const double dp = boost::math::legendre_p_prime(k, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it == 0.0) continue;
    nodes.push_back(-*it);
    weights.push_back(weight(*it));
  }
  for (double z : zeros) {
    nodes.push_back(z);
    weights.push_back(weight(z));
  }
}

int ResolvedCellsExponent(const QuadratureSpec& spec, std::size_t d) {
  if (spec.cells_exponent >= 0) return spec.cells_exponent;
  return int((12 + d - 1) / d);
}

MultiIndex ResolvedAxisExponents(const QuadratureSpec& spec, std::size_t d) {
  MultiIndex s(d, ResolvedCellsExponent(spec, d));
  if (!spec.min_axis_exponent.empty()) {
    if (spec.min_axis_exponent.size() != d) {
      throw std::invalid_argument("per-axis cell exponents have wrong dimension");
    }
    for (std::size_t j = 0; j < d; ++j) {
      s[j] = std::max(s[j], spec.min_axis_exponent[j]);
    }
  }
  return s;
}

QuadratureSpec ResolveForPlan(QuadratureSpec spec, const RecoveryPlan& plan) {
  MultiIndex finest(plan.params.d, 0);
  for (const MultiIndex& kappa : plan.levels) {
    for (std::size_t j = 0; j < finest.size(); ++j) {
      finest[j] = std::max(finest[j], kappa[j]);
    }
  }
  if (spec.min_axis_exponent.size() == finest.size()) {
    for (std::size_t j = 0; j < finest.size(); ++j) {
      finest[j] = std::max(finest[j], spec.min_axis_exponent[j]);
    }
  }
  spec.min_axis_exponent = finest;
  return spec;
}

int ResolvedSupGrid(const QuadratureSpec& spec, std::size_t d) {
  if (spec.sup_grid > 0) return spec.sup_grid;
  return d <= 2 ? (1 << 10) + 1 : (1 << 6) + 1;
}

double LqError(const PointFunction& g, const PointFunction& h, double q,
               std::size_t d, const QuadratureSpec& spec) {
  if (!(q >= 1.0)) throw std::invalid_argument("q must lie in [1, inf]");
  if (d == 0 || d > kMaxDim) throw std::invalid_argument("bad dimension");
  const MultiIndex s = ResolvedAxisExponents(spec, d);
  std::vector<double> gl_nodes, gl_weights;
  GaussLegendre(spec.points, gl_nodes, gl_weights);
  const int k = spec.points;

  // Per-axis quadrature abscissae and weights over all cells, cell-major.
  std::vector<std::vector<double>> xs(d), ws(d);
  MultiIndex cell_hi(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (s[j] > 30) throw std::invalid_argument("cell exponent too large");
    const int cells = 1 << s[j];
    const double width = std::ldexp(1.0, -s[j]);
    cell_hi[j] = cells - 1;
    xs[j].resize(std::size_t(cells) * k);
    ws[j].resize(std::size_t(cells) * k);
    for (int c = 0; c < cells; ++c) {
      for (int i = 0; i < k; ++i) {
        xs[j][c * k + i] = width * (c + 0.5 * (gl_nodes[i] + 1.0));
        ws[j][c * k + i] = 0.5 * width * gl_weights[i];
      }
    }
  }

  const bool sup = std::isinf(q);
  const MultiIndex zero(d, 0);
  const MultiIndex node_hi(d, k - 1);
  std::vector<double> partial;
  partial.reserve(std::size_t(BoxCardinality(zero, cell_hi)));
  double max_abs = 0.0;
  Point x(d);
  ForEachInBox(zero, cell_hi, [&](const MultiIndex& cell) {
    double cell_sum = 0.0;
    ForEachInBox(zero, node_hi, [&](const MultiIndex& node) {
      double w = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        const int idx = cell[j] * k + node[j];
        x[j] = xs[j][idx];
        w *= ws[j][idx];
      }
      const double diff = std::abs(g(x.span()) - h(x.span()));
      if (sup) {
        max_abs = std::max(max_abs, diff);
      } else {
        cell_sum += w * std::pow(diff, q);
      }
    });
    partial.push_back(cell_sum);
  });

  if (!sup) return std::pow(PairwiseSum(partial), 1.0 / q);

  const int grid = ResolvedSupGrid(spec, d);
  const double step = 1.0 / (grid - 1);
  ForEachInBox(zero, MultiIndex(d, grid - 1), [&](const MultiIndex& idx) {
    for (std::size_t j = 0; j < d; ++j) x[j] = idx[j] * step;
    max_abs = std::max(max_abs, std::abs(g(x.span()) - h(x.span())));
  });
  return max_abs;
}

}  // namespace mixrec
