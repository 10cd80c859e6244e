#include "balanced/iteration.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "balanced/errors.hpp"

namespace balanced {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Converged: return "Converged";
    case Classification::MaxIterations: return "MaxIterations";
    case Classification::Diverged: return "Diverged";
    case Classification::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

double boundedness_radius(const HermitianForm& h) {
  const Eigen::VectorXd ev = normalize(h).eigenvalues();
  return std::max({1.0, ev.maxCoeff(), 1.0 / ev.minCoeff()});
}

Classification classify(const IterationTrace& trace, double tol, double spread_max, int max_iter) {
  for (const auto& s : trace) {
    if (s.spread > spread_max) return Classification::Diverged;
  }
  if (!trace.empty() && trace.back().delta <= tol &&
      static_cast<int>(trace.size()) <= max_iter) {
    return Classification::Converged;
  }
  return Classification::MaxIterations;
}

namespace {

double hermitian_op_norm(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(m), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

std::pair<RunResult, IterationTrace> run(const HermitianForm& h0, const SectionBasis& basis,
                                         const QuadratureScheme& q,
                                         const IterationOptions& options) {
  if (!(options.tol > 0.0) || !(options.spread_max > 1.0) || options.max_iter < 1) {
    fail(ErrorKind::InvalidInput, "run needs tol > 0, spread_max > 1, max_iter >= 1");
  }
  if (h0.dim() != basis.dim()) fail(ErrorKind::InvalidInput, "initial Gram has wrong dimension");

  const double slack = 100.0 * q.eps_quad();
  const int n_dim = basis.dim();
  const FiberMetricField background = background_metric(basis);
  const double rv_over_n = basis.rank() * q.total_mass() / n_dim;
  RunResult result;
  IterationTrace trace;
  HermitianForm current = h0;
  result.final_gram = h0;

  auto numerical_failure = [&](int step, const std::string& why) {
    result.classification = Classification::NumericalFailure;
    result.failure = why;
    result.failure_step = step;
    result.final_gram = current;
    result.iterations = step;
    result.bergman_sup_residual = std::numeric_limits<double>::quiet_NaN();
    if (!trace.empty()) result.last_step = trace.back();
    return std::make_pair(result, trace);
  };

  for (int n = 0; n < options.max_iter; ++n) {
    try {
      const FiberMetricField h = fs(current, basis);
      const HermitianForm next = hilb(h, basis, q);
      IterationStep s;
      s.step = n;
      s.log_det = current.log_det();
      s.z_tilde = -energy_i(h, background, q) + rv_over_n * s.log_det;
      s.det_ratio = std::exp(next.log_det() - s.log_det);
      s.trace_residual = trace_identity_residual(current, next);
      s.spread = boundedness_radius(current);
      s.delta = hermitian_op_norm(normalize(next).gram() - normalize(current).gram());

      if (!trace.empty()) {
        const IterationStep& prev = trace.back();
        if (s.z_tilde > prev.z_tilde + slack || s.log_det > prev.log_det + slack) {
          std::ostringstream os;
          os << "monotonicity violated at step " << n << ": z_tilde " << prev.z_tilde << " -> "
             << s.z_tilde << ", log det " << prev.log_det << " -> " << s.log_det;
          trace.push_back(s);
          return numerical_failure(n, os.str());
        }
      }
      trace.push_back(s);
      if (s.trace_residual > slack) {
        std::ostringstream os;
        os << "trace identity residual " << s.trace_residual << " exceeds " << slack
           << " at step " << n;
        return numerical_failure(n, os.str());
      }
      current = next;
    } catch (const Error& e) {
      return numerical_failure(n, e.what());
    }

    const Classification c =
        classify(trace, options.tol, options.spread_max, options.max_iter);
    if (c != Classification::MaxIterations || n + 1 == options.max_iter) {
      result.classification = c;
      break;
    }
  }

  result.final_gram = current;
  result.iterations = static_cast<int>(trace.size());
  result.last_step = trace.back();
  try {
    result.bergman_sup_residual = bergman_sup_residual(
        bergman(fs(current, basis), basis, q), n_dim, basis.rank(), q.total_mass());
  } catch (const Error&) {
    result.bergman_sup_residual = std::numeric_limits<double>::quiet_NaN();
  }
  return {result, trace};
}

}  // namespace balanced
