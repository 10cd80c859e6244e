#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "balanced/config.hpp"
#include "balanced/geometry.hpp"
#include "balanced/iteration.hpp"

namespace balanced {

enum ExitCode : int {
  kExitConverged = 0,
  kExitMaxIterations = 2,
  kExitDiverged = 3,
  kExitInvalidInput = 4,
  kExitNumericalFailure = 5,
};

int exit_code_for(Classification c);

/// Columns: step, z_tilde, log_det, det_ratio, trace_residual, spread,
/// delta; every float with 17 significant digits.
void write_trace_csv(const IterationTrace& trace, std::ostream& out);

/// Final Gram as {"dim": N, "entries": [[re, im], ...]} in row-major order.
nlohmann::json gram_to_json(const HermitianForm& h);
HermitianForm gram_from_json(const nlohmann::json& j);

nlohmann::json result_to_json(const RunConfig& cfg, const RunResult& result,
                              const QuadratureScheme& q);

/// Executes the configured run, writes the trace CSV and result JSON and
/// returns the exit code for the classification (4 on invalid input).
int run_command(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

struct CheckOutcome {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Invariant checks on the configured problem: global generation, trace
/// identity, the monotone triple under T, scale invariance of z_tilde,
/// geodesic convexity of Z, Gieseker surjectivity and Kempf-Ness profile
/// convexity, plus the closed-form fixed point for line bundles.
std::vector<CheckOutcome> verify_checks(const RunConfig& cfg);

/// Prints one row per check and returns 0 iff all pass (4 on invalid input).
int verify_command(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

}  // namespace balanced
