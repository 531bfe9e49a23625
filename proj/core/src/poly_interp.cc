#include "mixrec/poly_interp.h"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mixrec {
namespace {

struct DegreeTable {
  std::vector<std::int64_t> numerators;
  std::vector<double> nodes;
  // monomial[i][p]: coefficient of t^p in the i-th basis polynomial.
  std::vector<std::vector<double>> monomial;
};

struct NodeTables {
  std::array<DegreeTable, kMaxInterpDegree + 1> by_degree;

  NodeTables() {
    for (int l = 0; l <= kMaxInterpDegree; ++l) {
      DegreeTable& tab = by_degree[l];
      for (int i = 0; i <= l; ++i) {
        const double cheb =
            0.5 * (1.0 - std::cos((2 * i + 1) * std::numbers::pi / (2 * l + 2)));
        const auto num =
            std::int64_t(std::llround(std::ldexp(cheb, kNodeBits)));
        tab.numerators.push_back(num);
        tab.nodes.push_back(std::ldexp(double(num), -kNodeBits));
      }
      tab.monomial.assign(l + 1, std::vector<double>(l + 1, 0.0));
      for (int i = 0; i <= l; ++i) {
        std::vector<double> poly{1.0};
        for (int j = 0; j <= l; ++j) {
          if (j == i) continue;
          const double scale = 1.0 / (tab.nodes[i] - tab.nodes[j]);
          std::vector<double> next(poly.size() + 1, 0.0);
          for (std::size_t p = 0; p < poly.size(); ++p) {
            next[p + 1] += poly[p] * scale;
            next[p] -= poly[p] * tab.nodes[j] * scale;
          }
          poly = std::move(next);
        }
        tab.monomial[i] = std::move(poly);
      }
    }
  }
};

const DegreeTable& TableFor(int l) {
  static const NodeTables tables;
  if (l < 0 || l > kMaxInterpDegree) {
    throw std::invalid_argument("interpolation degree " + std::to_string(l) +
                                " outside [0, " +
                                std::to_string(kMaxInterpDegree) + "]");
  }
  return tables.by_degree[l];
}

double ContractRecursive(const MultiIndex& l, std::span<const double> coeffs,
                         std::span<const double* const> weights,
                         std::size_t axis, std::int64_t offset) {
  if (axis == l.size()) return coeffs[offset];
  const int n = l[axis] + 1;
  const double* w = weights[axis];
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    if (w[k] == 0.0) continue;
    s += w[k] * ContractRecursive(l, coeffs, weights, axis + 1, offset * n + k);
  }
  return s;
}

}  // namespace

std::int64_t NodeNumerator(int l, int i) { return TableFor(l).numerators.at(i); }

std::span<const double> Nodes(int l) { return TableFor(l).nodes; }

double LagrangeBasis(int l, int i, double t) {
  const auto& nodes = TableFor(l).nodes;
  double v = 1.0;
  for (int j = 0; j <= l; ++j) {
    if (j == i) continue;
    v *= (t - nodes[j]) / (nodes[i] - nodes[j]);
  }
  return v;
}

double LagrangeBasisDerivative(int l, int i, int k, double t) {
  if (k == 0) return LagrangeBasis(l, i, t);
  if (k > l) return 0.0;
  const auto& c = TableFor(l).monomial.at(i);
  // Horner on the k-th derivative: Σ_p c_p p!/(p-k)! t^{p-k}
  double v = 0.0;
  for (int p = l; p >= k; --p) {
    double falling = 1.0;
    for (int q = 0; q < k; ++q) falling *= double(p - q);
    v = v * t + c[p] * falling;
  }
  return v;
}

void LagrangeBasisDerivatives(int l, int k, double t, std::span<double> out) {
  const DegreeTable& tab = TableFor(l);
  if (k == 0) {
    for (int i = 0; i <= l; ++i) {
      double v = 1.0;
      for (int j = 0; j <= l; ++j) {
        if (j != i) v *= (t - tab.nodes[j]) / (tab.nodes[i] - tab.nodes[j]);
      }
      out[i] = v;
    }
    return;
  }
  for (int i = 0; i <= l; ++i) out[i] = LagrangeBasisDerivative(l, i, k, t);
}

std::int64_t TensorNodeCount(const MultiIndex& l) {
  std::int64_t c = 1;
  for (int v : l) c *= v + 1;
  return c;
}

Point TensorNode(const Box& box, const MultiIndex& l, const MultiIndex& lambda) {
  Point x(l.size());
  for (std::size_t j = 0; j < l.size(); ++j) {
    x[j] = box.origin[j] + box.width[j] * Nodes(l[j])[lambda[j]];
  }
  return x;
}

double ContractTensor(const MultiIndex& l, std::span<const double> coeffs,
                      std::span<const double* const> weights) {
  return ContractRecursive(l, coeffs, weights, 0, 0);
}

TensorPoly::TensorPoly(MultiIndex degree, Box box,
                       std::vector<double> node_values)
    : degree_(degree), box_(std::move(box)), values_(std::move(node_values)) {
  if (box_.origin.size() != degree_.size() ||
      box_.width.size() != degree_.size()) {
    throw std::invalid_argument("box dimension differs from degree dimension");
  }
  for (std::size_t j = 0; j < degree_.size(); ++j) {
    TableFor(degree_[j]);
    if (!(box_.width[j] > 0.0)) {
      throw std::invalid_argument("box width must be positive");
    }
  }
  if (std::int64_t(values_.size()) != TensorNodeCount(degree_)) {
    throw std::invalid_argument("expected " +
                                std::to_string(TensorNodeCount(degree_)) +
                                " node values, got " +
                                std::to_string(values_.size()));
  }
}

double TensorPoly::Value(std::span<const double> x) const {
  return Derivative(MultiIndex(dim(), 0), x);
}

double TensorPoly::Derivative(const MultiIndex& lambda,
                              std::span<const double> x) const {
  const std::size_t d = dim();
  for (std::size_t j = 0; j < d; ++j) {
    if (lambda[j] > degree_[j]) return 0.0;
  }
  std::array<std::array<double, kMaxInterpDegree + 1>, kMaxDim> w;
  std::array<const double*, kMaxDim> ptrs;
  for (std::size_t j = 0; j < d; ++j) {
    const double t = (x[j] - box_.origin[j]) / box_.width[j];
    LagrangeBasisDerivatives(degree_[j], lambda[j], t, w[j]);
    const double scale = std::pow(box_.width[j], -lambda[j]);
    for (int i = 0; i <= degree_[j]; ++i) w[j][i] *= scale;
    ptrs[j] = w[j].data();
  }
  return ContractTensor(degree_, values_, {ptrs.data(), d});
}

TensorPoly TensorInterpolate(const MultiIndex& l, const Box& box,
                             std::vector<double> node_values) {
  return TensorPoly(l, box, std::move(node_values));
}

TensorPoly TensorInterpolate(const MultiIndex& l, const Box& box,
                             const std::map<MultiIndex, double>& values) {
  std::vector<double> flat;
  flat.reserve(TensorNodeCount(l));
  const MultiIndex zero(l.size(), 0);
  for (const auto& [lambda, v] : values) {
    if (lambda.size() != l.size() || !LessEqual(zero, lambda) ||
        !LessEqual(lambda, l)) {
      throw std::invalid_argument("node index " + ToString(lambda) +
                                  " outside Z_+^d(" + ToString(l) + ")");
    }
  }
  ForEachInBox(zero, l, [&](const MultiIndex& lambda) {
    auto it = values.find(lambda);
    if (it == values.end()) {
      throw std::invalid_argument("missing value for node index " +
                                  ToString(lambda));
    }
    flat.push_back(it->second);
  });
  return TensorPoly(l, box, std::move(flat));
}

}  // namespace mixrec
