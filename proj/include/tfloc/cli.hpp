#pragma once

#include <iosfwd>

#include "tfloc/config.hpp"

namespace tfloc::cli {

enum ExitCode : int { ok = 0, failure = 1, config_error = 2, solver_failure = 3, oracle_breach = 4 };

/// An oracle comparison exceeded its tolerance.
class OracleBreach : public Error {
 public:
  using Error::Error;
};

// Each command writes its files into cfg.outputs and progress notes to log.

/// spectrum.csv and report.json.
void cmd_spectrum(const ExperimentConfig& cfg, std::ostream& log);
/// rho.csv, rho.pgm (+ sidecar), mollified.csv, errors.json, cross_section.csv.
void cmd_accspec(const ExperimentConfig& cfg, std::ostream& log);
/// sweep.csv; rows above the cap are marked skipped.
void cmd_dilate(const ExperimentConfig& cfg, std::ostream& log);
/// recovered.pgm (+ sidecar) and recovery.json.
void cmd_recover(const ExperimentConfig& cfg, std::ostream& log);
/// oracle_vs_numeric.csv, hermite_overlap.csv and oracle_check.json; throws
/// OracleBreach after writing them when a tolerance is exceeded.
void cmd_oracle_check(const ExperimentConfig& cfg, std::ostream& log);

/// Parses arguments, dispatches, and maps errors to exit codes.
int main(int argc, char** argv);

}  // namespace tfloc::cli
