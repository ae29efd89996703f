#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "hmlab/analysis/bochner.hpp"
#include "hmlab/analysis/corollaries.hpp"
#include "hmlab/domain/quadrature.hpp"
#include "hmlab/lab/scenario.hpp"

namespace hmlab::lab {

struct CheckSummary {
  std::string name;
  int total = 0;
  int passed = 0;
  bool pass = false;
  std::string note;

  double fraction() const { return total > 0 ? static_cast<double>(passed) / total : 1.0; }
};

// Everything a run computed; emit_report turns it into files.
struct RunArtifacts {
  std::vector<solver::SweepRecord> convergence;
  std::vector<analysis::RadialProfile> profiles;
  std::vector<analysis::InequalityMargin> margins;
  std::optional<analysis::BochnerReport> bochner;
  std::vector<domain::QuadratureCheck> quadrature;
  nlohmann::json summary;
};

struct RunResult {
  std::string name;
  bool solved = false;
  bool converged = false;
  int sweeps = 0;
  double energy = 0.0;
  double wall_seconds = 0.0;
  std::vector<CheckSummary> checks;
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> manifest;
  RunArtifacts artifacts;

  bool all_pass() const;
  // 0 all checks pass, 2 failing margins, 3 solver did not converge.
  int exit_code() const;
};

struct RunOptions {
  std::optional<std::filesystem::path> output;      // overrides the scenario
  std::optional<std::vector<std::string>> checks;   // overrides analysis.checks
  int threads = 1;
  bool write = true;
};

RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

// Writes margins.csv, bochner.csv, convergence.csv, profiles.csv,
// quadrature.csv (when computed), summary.json and summary.txt into `dir`.
// Returns the written paths in that order.
std::vector<std::filesystem::path> emit_report(const RunResult& result, const std::filesystem::path& dir);

}  // namespace hmlab::lab
