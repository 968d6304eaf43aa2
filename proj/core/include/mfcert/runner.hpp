#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "mfcert/bounds.hpp"
#include "mfcert/config.hpp"
#include "mfcert/dynamics.hpp"
#include "mfcert/purify.hpp"
#include "mfcert/scenarios.hpp"

namespace mfcert {

/// Process exit codes of a run.
inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCertificationFailure = 2;

struct PurificationSummary {
  double fidelity0 = 0.0;
  double alpha0 = 0.0;
  double overlap_sq = 0.0;
  double marginal_defect = 0.0;
  double symmetry_defect = 0.0;
  double initial_bound_margin = 0.0;
  std::size_t kernel_dim = 0;
};

struct RunResult {
  ExperimentConfig config;
  PurificationSummary purification;
  EnvelopeInputs inputs;
  Trajectory trajectory;
  MarginReport report;
  std::optional<MixtureCurves> mixture;
  double max_norm_defect = 0.0;
  double max_energy_drift = 0.0;

  bool passed() const { return report.passed(); }
  int exit_code() const { return passed() ? kExitPass : kExitCertificationFailure; }
};

/// model -> scenario -> purification -> trajectory -> certification. Throws
/// on invalid configs before any computation; certification failures are
/// recorded in the report rather than thrown.
RunResult run(const ExperimentConfig& config);

/// trajectory.csv, margins.csv, summary.json, config.txt and plots/*.dat.
void write_outputs(const RunResult& result, const std::filesystem::path& dir);

std::string trajectory_csv(const RunResult& result);
std::string summary_json(const RunResult& result);

}  // namespace mfcert
