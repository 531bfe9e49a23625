#ifndef MIXREC_TOOLS_HARNESS_STUDY_H_
#define MIXREC_TOOLS_HARNESS_STUDY_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "mixrec/recovery.h"
#include "mixrec/sparse_grid.h"

namespace mixrec::harness {

// A convergence experiment: recover D^λ f of a registry function for a list of
// point budgets and measure the L_q error.
struct StudyConfig {
  SmoothnessParams params;
  std::string test_function;
  std::vector<std::int64_t> budgets;  // strictly increasing
  QuadratureSpec quadrature;
  std::uint64_t seed = 0;
  std::string output;
  // Wall times are nondeterministic; unless enabled the wall_ms column is 0.
  bool record_timing = false;
};

// Strict parsing: unknown keys, wrong types and inadmissible parameters raise
// ValidationError. q and theta accept a number or the string "inf".
StudyConfig ParseStudyConfig(const nlohmann::json& doc);
StudyConfig LoadStudyConfig(const std::string& path);

struct StudyRow {
  std::int64_t n_budget = 0;
  int r = 0;
  std::int64_t n_actual = 0;
  double q = 2.0;
  double error = 0.0;
  double wall_ms = 0.0;
};

struct RateFit {
  // log E ≈ intercept + slope · log n
  double slope = 0.0;
  double intercept = 0.0;
  // log E ≈ a + corrected_slope · log n + log_coeff · log log n
  double corrected_slope = 0.0;
  double log_coeff = 0.0;
  bool corrected_valid = false;
  // log E - γ log log n ≈ a + slope_given_log · log n with γ from the
  // parameters.
  double slope_given_log = 0.0;
  double log_exponent = 0.0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  RateFit fit;
};

// Fits use n_actual as the abscissa.
RateFit FitRates(const std::vector<StudyRow>& rows, double log_exponent);

StudyResult RunStudy(const StudyConfig& config);

// Header n_budget,r,n_actual,q,error,wall_ms; errors in %.17e.
void WriteStudyCsv(std::ostream& os, const std::vector<StudyRow>& rows);

std::string FormatFit(const RateFit& fit);

}  // namespace mixrec::harness

#endif  // MIXREC_TOOLS_HARNESS_STUDY_H_
