#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "balanced/core.hpp"

namespace balanced {

/// Diagnostics of one step H_n -> H_{n+1} = T(H_n).
struct IterationStep {
  int step = 0;
  double z_tilde = 0.0;         // at H_n
  double log_det = 0.0;         // at H_n
  double det_ratio = 0.0;       // det(H_{n+1} H_n^{-1})
  double trace_residual = 0.0;  // |Tr(H_{n+1} H_n^{-1}) - N|
  double spread = 0.0;          // boundedness radius of H_n
  double delta = 0.0;           // ||normalize(H_{n+1}) - normalize(H_n)||_op
};

using IterationTrace = std::vector<IterationStep>;

enum class Classification { Converged, MaxIterations, Diverged, NumericalFailure };

const char* to_string(Classification c);

struct IterationOptions {
  double tol = 1e-8;
  double spread_max = 1e6;
  int max_iter = 500;
};

struct RunResult {
  Classification classification = Classification::MaxIterations;
  HermitianForm final_gram = HermitianForm::identity(1);
  int iterations = 0;
  std::optional<IterationStep> last_step;
  /// sup ||B - (N/(rV)) Id|| at the final iterate; NaN if not computed.
  double bergman_sup_residual = 0.0;
  /// Set for NumericalFailure.
  std::string failure;
  int failure_step = -1;
};

/// max(lambda_max, 1/lambda_min) of normalize(H); always >= 1.
double boundedness_radius(const HermitianForm& h);

/// Pure classification of a recorded trace. Diverged (any spread above
/// spread_max) wins over Converged and MaxIterations.
Classification classify(const IterationTrace& trace, double tol, double spread_max, int max_iter);

/// Iterates H_{n+1} = T(H_n) until the normalized step delta drops to tol,
/// the spread exceeds spread_max, or max_iter steps have run. Any increase
/// of z_tilde or log det beyond 100 eps_quad, or a trace-identity residual
/// beyond 100 eps_quad, aborts with NumericalFailure.
std::pair<RunResult, IterationTrace> run(const HermitianForm& h0, const SectionBasis& basis,
                                         const QuadratureScheme& q,
                                         const IterationOptions& options = {});

}  // namespace balanced
