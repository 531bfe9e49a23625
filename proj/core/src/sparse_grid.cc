#include "mixrec/sparse_grid.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "mixrec/bspline.h"
#include "mixrec/dyadic_operators.h"
#include "mixrec/poly_interp.h"

namespace mixrec {
namespace {

constexpr int kMaxExponent = 63;

double Tolerance(double r) { return 1e-12 * std::max(1.0, std::abs(r)); }

void IndexSetDfs(const Point& beta, std::size_t j, double remaining,
                 double tol, MultiIndex& kappa, std::vector<MultiIndex>& out) {
  if (j == beta.size()) {
    out.push_back(kappa);
    return;
  }
  for (int k = 0; k * beta[j] <= remaining + tol; ++k) {
    kappa[j] = k;
    IndexSetDfs(beta, j + 1, remaining - k * beta[j], tol, kappa, out);
  }
  kappa[j] = 0;
}

// Σ over κ_j, ..., κ_{d-1} with Σ_{i>=j} β_i κ_i > remaining of
// Π 2^{-α_i κ_i}.
double TailFrom(const Point& alpha, const Point& beta, std::size_t j,
                double remaining, double tol) {
  const std::size_t d = alpha.size();
  // Full sum over axes j..d-1: Π 1/(1 - 2^{-α_i}).
  auto full = [&](std::size_t from) {
    double s = 1.0;
    for (std::size_t i = from; i < d; ++i) s /= 1.0 - std::exp2(-alpha[i]);
    return s;
  };
  if (remaining < -tol) return full(j);
  if (j + 1 == d) {
    // κ_j > remaining / β_j
    const double k0 = std::floor((remaining + tol) / beta[j]) + 1.0;
    return std::exp2(-alpha[j] * k0) / (1.0 - std::exp2(-alpha[j]));
  }
  double s = 0.0;
  int k = 0;
  for (; k * beta[j] <= remaining + tol; ++k) {
    s += std::exp2(-alpha[j] * k) *
         TailFrom(alpha, beta, j + 1, remaining - k * beta[j], tol);
  }
  // Beyond this point every continuation lies in the tail.
  s += std::exp2(-alpha[j] * k) / (1.0 - std::exp2(-alpha[j])) * full(j + 1);
  return s;
}

std::string JoinInts(const MultiIndex& v) { return ToString(v); }

MultiIndex ParseInts(const std::string& s) {
  MultiIndex v;
  std::vector<int> vals;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stoi(item));
  return MultiIndex(std::span<const int>(vals));
}

DyadicRational ParseDyadic(const std::string& s) {
  const auto slash = s.find("/2^");
  if (slash == std::string::npos) {
    throw std::invalid_argument("malformed dyadic coordinate '" + s + "'");
  }
  return DyadicRational::Make(std::stoull(s.substr(0, slash)),
                              std::stoi(s.substr(slash + 3)));
}

}  // namespace

MultiIndex SmoothnessParams::InterpDegree() const {
  MultiIndex deg = l;
  for (int& v : deg) v -= 1;
  return deg;
}

double SmoothnessParams::LogExponent() const {
  const double inv = 1.0 / std::max(p, theta);
  return (mn + 1.0 - inv) * (cmn - 1);
}

SmoothnessParams DeriveParams(std::size_t d, const Point& alpha, double p,
                              double q, double theta,
                              const MultiIndex& lambda) {
  if (d == 0 || d > kMaxDim) {
    throw ValidationError("dimension must be in [1, " +
                          std::to_string(kMaxDim) + "]");
  }
  if (alpha.size() != d || lambda.size() != d) {
    throw ValidationError("alpha and lambda must have d = " +
                          std::to_string(d) + " entries");
  }
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw ValidationError("p must lie in [1, inf)");
  }
  if (!(q >= 1.0)) throw ValidationError("q must lie in [1, inf]");
  if (!(theta >= 1.0)) throw ValidationError("theta must lie in [1, inf]");

  SmoothnessParams sp;
  sp.d = d;
  sp.alpha = alpha;
  sp.p = p;
  sp.q = q;
  sp.theta = theta;
  sp.lambda = lambda;
  sp.l = MultiIndex(d);
  sp.gamma = Point(d);
  const double excess = std::max(1.0 / p - 1.0 / q, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    const std::string axis = "axis " + std::to_string(j + 1);
    if (!(alpha[j] > 0.0) || !std::isfinite(alpha[j])) {
      throw ValidationError(axis + ": alpha must be positive and finite");
    }
    if (lambda[j] < 0) throw ValidationError(axis + ": lambda must be >= 0");
    if (!(alpha[j] - 1.0 / p > 0.0)) {
      throw ValidationError(axis + ": alpha - 1/p = " +
                            std::to_string(alpha[j] - 1.0 / p) +
                            " is not positive");
    }
    sp.gamma[j] = alpha[j] - lambda[j] - excess;
    if (!(sp.gamma[j] > 0.0)) {
      throw ValidationError(axis + ": alpha - lambda - (1/p - 1/q)_+ = " +
                            std::to_string(sp.gamma[j]) + " is not positive");
    }
    sp.l[j] = int(std::floor(alpha[j])) + 1;
    if (sp.l[j] - 1 > kMaxInterpDegree) {
      throw ValidationError(axis + ": interpolation degree l - 1 = " +
                            std::to_string(sp.l[j] - 1) + " exceeds " +
                            std::to_string(kMaxInterpDegree));
    }
    if (lambda[j] > kMaxSplineOrder) {
      throw ValidationError(axis + ": lambda exceeds the spline order cap");
    }
  }
  sp.mn = *std::min_element(sp.gamma.begin(), sp.gamma.end());
  sp.beta = Point(d);
  const double tie = 1e-12 * std::max(1.0, sp.mn);
  for (std::size_t j = 0; j < d; ++j) {
    if (sp.gamma[j] - sp.mn <= tie) {
      sp.critical_axes.push_back(int(j));
      sp.beta[j] = 1.0;
    } else {
      sp.beta[j] = std::sqrt(sp.gamma[j] / sp.mn);
    }
  }
  sp.cmn = int(sp.critical_axes.size());
  return sp;
}

std::vector<MultiIndex> HyperbolicIndexSet(const Point& beta, double r) {
  for (double b : beta) {
    if (!(b > 0.0)) throw std::invalid_argument("beta must be positive");
  }
  std::vector<MultiIndex> out;
  if (r < 0) return out;
  MultiIndex kappa(beta.size(), 0);
  IndexSetDfs(beta, 0, r, Tolerance(r), kappa, out);
  return out;
}

double WeightedHeadSum(const Point& alpha, const Point& beta, double r) {
  double s = 0.0;
  for (const MultiIndex& kappa : HyperbolicIndexSet(beta, r)) {
    s += std::exp2(Dot(kappa, alpha));
  }
  return s;
}

double WeightedTailSum(const Point& alpha, const Point& beta, double r) {
  for (double a : alpha) {
    if (!(a > 0.0)) throw std::invalid_argument("tail exponent must be positive");
  }
  if (alpha.empty()) return 0.0;
  return TailFrom(alpha, beta, 0, r, Tolerance(r));
}

DyadicRational DyadicRational::Make(std::uint64_t numerator, int exponent) {
  if (numerator == 0) return {0, 0};
  while (exponent > 0 && (numerator & 1u) == 0) {
    numerator >>= 1;
    --exponent;
  }
  return {numerator, exponent};
}

double DyadicRational::ToDouble() const {
  return std::ldexp(double(numerator), -exponent);
}

std::string DyadicRational::ToString() const {
  return std::to_string(numerator) + "/2^" + std::to_string(exponent);
}

std::size_t DyadicPointHash::operator()(const DyadicPoint& p) const {
  std::uint64_t h = 1469598103934665603ull;
  for (const DyadicRational& c : p) {
    h ^= c.numerator + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= std::uint64_t(c.exponent) * 0xff51afd7ed558ccdull;
    h *= 1099511628211ull;
  }
  return std::size_t(h);
}

std::int64_t RecoveryPlan::nodes_per_cell() const {
  return TensorNodeCount(degree);
}

Point RecoveryPlan::PointCoordinates(std::int64_t i) const {
  const DyadicPoint& p = points.at(i);
  Point x(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) x[j] = p[j].ToDouble();
  return x;
}

RecoveryPlan BuildPlan(const SmoothnessParams& params, int r) {
  if (r < 1) throw ValidationError("r must be a positive integer");
  RecoveryPlan plan;
  plan.params = params;
  plan.r = r;
  plan.degree = params.InterpDegree();
  plan.levels = HyperbolicIndexSet(params.beta, r);
  const std::size_t d = params.d;
  const MultiIndex zero(d, 0);

  for (const MultiIndex& kappa : plan.levels) {
    for (int k : kappa) {
      if (kNodeBits + k > kMaxExponent) {
        throw std::overflow_error("level " + ToString(kappa) +
                                  " exceeds the exact coordinate range; "
                                  "r is too large");
      }
    }
  }

  // Per-axis node numerators for the interpolation degree.
  std::vector<std::vector<std::uint64_t>> node_num(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (int i = 0; i <= plan.degree[j]; ++i) {
      node_num[j].push_back(std::uint64_t(NodeNumerator(plan.degree[j], i)));
    }
  }

  std::unordered_map<DyadicPoint, std::int64_t, DyadicPointHash> index;
  for (const MultiIndex& kappa : plan.levels) {
    plan.level_offset.push_back(std::int64_t(plan.node_points.size()));
    const ShiftBox cells = CellRange(kappa);
    ForEachInBox(cells.lo, cells.hi, [&](const MultiIndex& cell) {
      ForEachInBox(zero, plan.degree, [&](const MultiIndex& rho) {
        DyadicPoint pt(d);
        for (std::size_t j = 0; j < d; ++j) {
          const std::uint64_t num =
              (std::uint64_t(cell[j]) << kNodeBits) + node_num[j][rho[j]];
          pt[j] = DyadicRational::Make(num, kNodeBits + kappa[j]);
        }
        ++plan.raw_count;
        auto [it, inserted] =
            index.try_emplace(pt, std::int64_t(plan.points.size()));
        if (inserted) {
          plan.points.push_back(pt);
          plan.tags.push_back({kappa, cell, rho});
        }
        plan.node_points.push_back(it->second);
      });
    });
  }
  return plan;
}

std::int64_t PlanPointCount(const SmoothnessParams& params, int r) {
  return BuildPlan(params, r).n_actual();
}

int ChooseLevel(const SmoothnessParams& params, std::int64_t n) {
  const std::int64_t minimum = PlanPointCount(params, 1);
  if (n < minimum) {
    throw ValidationError("budget " + std::to_string(n) +
                          " is below the smallest plan size " +
                          std::to_string(minimum));
  }
  int r = 1;
  while (PlanPointCount(params, r + 1) <= n) ++r;
  return r;
}

void WritePlan(std::ostream& os, const RecoveryPlan& plan) {
  os << "# d=" << plan.params.d << " r=" << plan.r
     << " n_actual=" << plan.n_actual() << " raw=" << plan.raw_count
     << " degree=" << JoinInts(plan.degree) << '\n';
  for (std::size_t i = 0; i < plan.points.size(); ++i) {
    const PointTag& t = plan.tags[i];
    os << JoinInts(t.level) << '\t' << JoinInts(t.cell) << '\t'
       << JoinInts(t.node) << '\t';
    for (std::size_t j = 0; j < plan.points[i].size(); ++j) {
      if (j) os << ',';
      os << plan.points[i][j].ToString();
    }
    os << '\n';
  }
}

std::vector<PlanLine> ReadPlan(std::istream& is) {
  std::vector<PlanLine> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    if (fields.size() != 4) {
      throw std::invalid_argument("plan line needs 4 tab-separated fields");
    }
    PlanLine pl;
    pl.tag = {ParseInts(fields[0]), ParseInts(fields[1]), ParseInts(fields[2])};
    std::vector<DyadicRational> coords;
    std::stringstream cs(fields[3]);
    while (std::getline(cs, f, ',')) coords.push_back(ParseDyadic(f));
    pl.coordinates = DyadicPoint(std::span<const DyadicRational>(coords));
    out.push_back(std::move(pl));
  }
  return out;
}

}  // namespace mixrec
