#include "harness/study.h"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "mixrec/smoothness_lab.h"

namespace mixrec::harness {
namespace {

using nlohmann::json;

double ParseExtended(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && (v.get<std::string>() == "inf" ||
                        v.get<std::string>() == "infinity")) {
    return kInfinity;
  }
  throw ValidationError("'" + key + "' must be a number or \"inf\"");
}

int ParseInt(const json& v, const std::string& key) {
  if (!v.is_number_integer()) {
    throw ValidationError("'" + key + "' must be an integer");
  }
  return v.get<int>();
}

std::string FormatQ(double q) {
  if (std::isinf(q)) return "inf";
  std::ostringstream os;
  os << q;
  return os.str();
}

// Least squares for y ≈ X c with up to three columns, via normal equations.
template <std::size_t K>
bool SolveLeastSquares(const std::vector<std::array<double, K>>& rows,
                       const std::vector<double>& y, std::array<double, K>& c) {
  std::array<std::array<double, K + 1>, K> a{};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t r = 0; r < K; ++r) {
      for (std::size_t s = 0; s < K; ++s) a[r][s] += rows[i][r] * rows[i][s];
      a[r][K] += rows[i][r] * y[i];
    }
  }
  for (std::size_t col = 0; col < K; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < K; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < 1e-12) return false;
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < K; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t s = col; s <= K; ++s) a[r][s] -= f * a[col][s];
    }
  }
  for (std::size_t r = 0; r < K; ++r) c[r] = a[r][K] / a[r][r];
  return true;
}

}  // namespace

StudyConfig ParseStudyConfig(const json& doc) {
  static const std::set<std::string> kKnown = {
      "d",      "alpha",   "lambda", "p",      "q",
      "theta",  "test_function", "budgets", "quadrature", "seed",
      "output", "record_timing"};
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!kKnown.count(key)) throw ValidationError("unknown config key '" + key + "'");
  }
  for (const char* key : {"d", "alpha", "p", "q", "test_function", "budgets"}) {
    if (!doc.contains(key)) {
      throw ValidationError(std::string("missing config key '") + key + "'");
    }
  }

  StudyConfig cfg;
  const int d = ParseInt(doc["d"], "d");
  if (d < 1 || std::size_t(d) > kMaxDim) throw ValidationError("d out of range");

  auto vector_of = [&](const char* key, auto convert) {
    const json& v = doc[key];
    if (!v.is_array() || v.size() != std::size_t(d)) {
      throw ValidationError(std::string("'") + key + "' must be an array of " +
                            std::to_string(d) + " entries");
    }
    for (std::size_t j = 0; j < v.size(); ++j) convert(j, v[j]);
  };
  Point alpha(d);
  vector_of("alpha", [&](std::size_t j, const json& v) {
    if (!v.is_number()) throw ValidationError("'alpha' entries must be numbers");
    alpha[j] = v.get<double>();
  });
  MultiIndex lambda(d, 0);
  if (doc.contains("lambda")) {
    vector_of("lambda", [&](std::size_t j, const json& v) {
      lambda[j] = ParseInt(v, "lambda");
    });
  }
  const double p = ParseExtended(doc["p"], "p");
  const double q = ParseExtended(doc["q"], "q");
  const double theta =
      doc.contains("theta") ? ParseExtended(doc["theta"], "theta") : kInfinity;
  cfg.params = DeriveParams(d, alpha, p, q, theta, lambda);

  if (!doc["test_function"].is_string()) {
    throw ValidationError("'test_function' must be a string");
  }
  cfg.test_function = doc["test_function"].get<std::string>();
  try {
    FindTestFunction(cfg.test_function, d);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }

  const json& budgets = doc["budgets"];
  if (!budgets.is_array() || budgets.empty()) {
    throw ValidationError("'budgets' must be a nonempty array");
  }
  for (const json& b : budgets) {
    if (!b.is_number_integer() || b.get<std::int64_t>() < 1) {
      throw ValidationError("budgets must be positive integers");
    }
    const std::int64_t n = b.get<std::int64_t>();
    if (!cfg.budgets.empty() && n <= cfg.budgets.back()) {
      throw ValidationError("budgets must be strictly increasing");
    }
    cfg.budgets.push_back(n);
  }

  if (doc.contains("quadrature")) {
    const json& qd = doc["quadrature"];
    if (!qd.is_object()) throw ValidationError("'quadrature' must be an object");
    for (const auto& [key, v] : qd.items()) {
      if (key == "cells_exponent") {
        cfg.quadrature.cells_exponent = ParseInt(v, key);
      } else if (key == "points") {
        cfg.quadrature.points = ParseInt(v, key);
        if (cfg.quadrature.points < 1) throw ValidationError("points must be >= 1");
      } else if (key == "sup_grid") {
        cfg.quadrature.sup_grid = ParseInt(v, key);
        if (cfg.quadrature.sup_grid < 2) throw ValidationError("sup_grid must be >= 2");
      } else {
        throw ValidationError("unknown quadrature key '" + key + "'");
      }
    }
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      throw ValidationError("'seed' must be a nonnegative integer");
    }
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ValidationError("'output' must be a string");
    cfg.output = doc["output"].get<std::string>();
  }
  if (doc.contains("record_timing")) {
    if (!doc["record_timing"].is_boolean()) {
      throw ValidationError("'record_timing' must be a boolean");
    }
    cfg.record_timing = doc["record_timing"].get<bool>();
  }
  return cfg;
}

StudyConfig LoadStudyConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return ParseStudyConfig(doc);
}

RateFit FitRates(const std::vector<StudyRow>& rows, double log_exponent) {
  RateFit fit;
  fit.log_exponent = log_exponent;
  std::vector<std::array<double, 2>> x2;
  std::vector<std::array<double, 3>> x3;
  std::vector<double> y, y_shift;
  for (const StudyRow& row : rows) {
    if (!(row.error > 0.0)) continue;
    const double ln = std::log(double(row.n_actual));
    const double lln = std::log(ln);
    x2.push_back({1.0, ln});
    x3.push_back({1.0, ln, lln});
    y.push_back(std::log(row.error));
    y_shift.push_back(std::log(row.error) - log_exponent * lln);
  }
  std::array<double, 2> c2{};
  if (x2.size() >= 2 && SolveLeastSquares(x2, y, c2)) {
    fit.intercept = c2[0];
    fit.slope = c2[1];
  }
  if (x2.size() >= 2 && SolveLeastSquares(x2, y_shift, c2)) {
    fit.slope_given_log = c2[1];
  }
  std::array<double, 3> c3{};
  if (x3.size() >= 3 && SolveLeastSquares(x3, y, c3)) {
    fit.corrected_slope = c3[1];
    fit.log_coeff = c3[2];
    fit.corrected_valid = true;
  }
  return fit;
}

StudyResult RunStudy(const StudyConfig& config) {
  const SmoothnessParams& params = config.params;
  const TestFunction fn = FindTestFunction(config.test_function, params.d);
  const PointFunction f = fn.AsFunction();
  const PointFunction reference = fn.DerivativeFunction(params.lambda);

  StudyResult result;
  // Budgets that select the same r share one reconstruction.
  std::map<int, StudyRow> by_level;
  for (std::int64_t n : config.budgets) {
    const auto start = std::chrono::steady_clock::now();
    const int r = ChooseLevel(params, n);
    StudyRow row;
    auto cached = by_level.find(r);
    if (cached != by_level.end()) {
      row = cached->second;
    } else {
      auto plan = std::make_shared<const RecoveryPlan>(BuildPlan(params, r));
      const SampleSet samples = Sample(f, plan);
      const Approximant approx = Reconstruct(samples, params.lambda);
      const PointFunction g = [&approx](std::span<const double> x) {
        return approx(x);
      };
      row.r = r;
      row.n_actual = plan->n_actual();
      row.q = params.q;
      row.error = LqError(g, reference, params.q, params.d,
                          ResolveForPlan(config.quadrature, *plan));
      by_level.emplace(r, row);
    }
    row.n_budget = n;
    const auto stop = std::chrono::steady_clock::now();
    row.wall_ms =
        config.record_timing
            ? std::chrono::duration<double, std::milli>(stop - start).count()
            : 0.0;
    result.rows.push_back(row);
  }
  result.fit = FitRates(result.rows, params.LogExponent());
  return result;
}

void WriteStudyCsv(std::ostream& os, const std::vector<StudyRow>& rows) {
  os << "n_budget,r,n_actual,q,error,wall_ms\n";
  char buf[64];
  for (const StudyRow& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17e", row.error);
    os << row.n_budget << ',' << row.r << ',' << row.n_actual << ','
       << FormatQ(row.q) << ',' << buf << ',';
    std::snprintf(buf, sizeof buf, "%.3f", row.wall_ms);
    os << buf << '\n';
  }
}

std::string FormatFit(const RateFit& fit) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "slope=%.6f intercept=%.6f slope_given_log=%.6f "
                "log_exponent=%.6f",
                fit.slope, fit.intercept, fit.slope_given_log, fit.log_exponent);
  std::string out = buf;
  if (fit.corrected_valid) {
    std::snprintf(buf, sizeof buf, " corrected_slope=%.6f log_coeff=%.6f",
                  fit.corrected_slope, fit.log_coeff);
    out += buf;
  }
  return out;
}

}  // namespace mixrec::harness
