// mixrec: recover mixed derivatives from hyperbolic-cross samples.
//
//   mixrec study --config study.json --out rows.csv
//   mixrec diagnose --suite all
//   mixrec plan --config study.json --out points.tsv [--budget N | --r R]
//
// Exit status: 0 success, 1 validation error, 2 property failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "harness/diagnostics.h"
#include "harness/study.h"
#include "mixrec/sparse_grid.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitPropertyFailure = 2;

int RunStudyCommand(const std::string& config_path, std::string out_path) {
  const auto config = mixrec::harness::LoadStudyConfig(config_path);
  if (out_path.empty()) out_path = config.output;
  if (out_path.empty()) {
    throw mixrec::ValidationError("no output path: pass --out or set 'output'");
  }
  const auto result = mixrec::harness::RunStudy(config);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw mixrec::ValidationError("cannot write '" + out_path + "'");
  mixrec::harness::WriteStudyCsv(out, result.rows);
  std::cout << mixrec::harness::FormatFit(result.fit) << '\n';
  return kExitOk;
}

int RunPlanCommand(const std::string& config_path, const std::string& out_path,
                   long long budget, int r) {
  const auto config = mixrec::harness::LoadStudyConfig(config_path);
  if (r <= 0) {
    const long long n = budget > 0 ? budget : config.budgets.back();
    r = mixrec::ChooseLevel(config.params, n);
  }
  const mixrec::RecoveryPlan plan = mixrec::BuildPlan(config.params, r);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw mixrec::ValidationError("cannot write '" + out_path + "'");
  mixrec::WritePlan(out, plan);
  std::cout << "r=" << plan.r << " n_actual=" << plan.n_actual()
            << " raw=" << plan.raw_count << '\n';
  return kExitOk;
}

int RunDiagnoseCommand(const std::string& suite, std::uint64_t seed) {
  const auto results = mixrec::harness::RunDiagnostics(suite, seed);
  mixrec::harness::WriteDiagnostics(std::cout, results);
  for (const auto& r : results) {
    if (!r.passed) return kExitPropertyFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-grid recovery of mixed derivatives from point samples"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  auto* study = app.add_subcommand("study", "run a convergence study, write CSV");
  study->add_option("--config", config_path, "JSON study configuration")
      ->required();
  study->add_option("--out", out_path, "CSV output path");

  std::string suite = "all";
  std::uint64_t seed = 1;
  auto* diagnose = app.add_subcommand("diagnose", "run property diagnostics");
  diagnose->add_option("--suite", suite, "bspline, interp, operators, "
                                         "sparse_grid, recovery, lab or all");
  diagnose->add_option("--seed", seed, "random seed");

  long long budget = 0;
  int level = 0;
  auto* plan = app.add_subcommand("plan", "write the sample point plan");
  plan->add_option("--config", config_path, "JSON study configuration")
      ->required();
  plan->add_option("--out", out_path, "point file")->required();
  plan->add_option("--budget", budget, "point budget (default: largest in config)");
  plan->add_option("--r", level, "hyperbolic level r (overrides --budget)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*study) return RunStudyCommand(config_path, out_path);
    if (*plan) return RunPlanCommand(config_path, out_path, budget, level);
    if (*diagnose) return RunDiagnoseCommand(suite, seed);
  } catch (const mixrec::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
