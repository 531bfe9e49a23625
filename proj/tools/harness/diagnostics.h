#ifndef MIXREC_TOOLS_HARNESS_DIAGNOSTICS_H_
#define MIXREC_TOOLS_HARNESS_DIAGNOSTICS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mixrec::harness {

struct DiagnosticResult {
  std::string suite;
  std::string property;
  bool passed = false;
  double residual = 0.0;
  double limit = 0.0;
};

// Suites: bspline, interp, operators, sparse_grid, recovery, lab; "all" runs
// every suite. Throws std::invalid_argument for unknown selectors.
std::vector<DiagnosticResult> RunDiagnostics(const std::string& selector,
                                             std::uint64_t seed = 1);

const std::vector<std::string>& DiagnosticSuites();

// One tab-separated line per property:
//   suite  property  PASS|FAIL  residual=<r>  limit=<l>
void WriteDiagnostics(std::ostream& os,
                      const std::vector<DiagnosticResult>& results);

}  // namespace mixrec::harness

#endif  // MIXREC_TOOLS_HARNESS_DIAGNOSTICS_H_
