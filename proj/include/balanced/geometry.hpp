#pragma once

#include <functional>
#include <span>
#include <vector>

#include "balanced/types.hpp"

namespace balanced {

/// Tensor-product quadrature for the Fubini-Study volume form on P1 or P2,
/// normalized to total mass 1.
///
/// Nodes are laid out through the moment map p_j = |z_j|^2 / (1 + |z|^2),
/// under which the normalized measure is uniform on the simplex with
/// independent uniform angles. Gauss-Legendre handles the simplex
/// directions (collapsed coordinates on P2) and the trapezoid rule with
/// 2*order+1 points handles each angle, so every monomial moment whose
/// weight degree is at most exactness_degree() is integrated exactly.
class QuadratureScheme {
 public:
  Manifold manifold() const { return manifold_; }
  int order() const { return order_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<ChartPoint>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double total_mass() const { return total_mass_; }

  /// Largest weight degree k for which all moments are exact.
  int exactness_degree() const { return exactness_degree_; }

  /// Quadrature tolerance budget used by downstream residual thresholds.
  /// Maximum absolute error over the oracle moment family of weight
  /// degree <= min(exactness_degree, kMomentBudgetDegree), floored at the
  /// a-priori roundoff bound size() * DBL_EPSILON of the node sum.
  double eps_quad() const { return eps_quad_; }
  /// The measured part of eps_quad, before flooring.
  double measured_moment_error() const { return measured_moment_error_; }

  static constexpr int kMomentBudgetDegree = 8;

  friend QuadratureScheme build_quadrature(Manifold manifold, int order);

 private:
  QuadratureScheme() = default;

  Manifold manifold_ = Manifold::P1;
  int order_ = 0;
  std::vector<ChartPoint> nodes_;
  std::vector<double> weights_;
  double total_mass_ = 0.0;
  int exactness_degree_ = 0;
  double eps_quad_ = 0.0;
  double measured_moment_error_ = 0.0;
};

/// Requires order >= 2. Node count is order * (2 order + 1) on P1 and
/// order^2 (2 order + 1)^2 on P2.
QuadratureScheme build_quadrature(Manifold manifold, int order);

/// Sum of w_q f_q with fixed-order pairwise summation. Throws a
/// numerical-domain error naming the first node with a non-finite value.
Complex integrate(const QuadratureScheme& q, std::span<const Complex> f);
double integrate(const QuadratureScheme& q, std::span<const double> f);

/// Convenience: evaluates f at every node, then integrates.
Complex integrate(const QuadratureScheme& q, const std::function<Complex(const ChartPoint&)>& f);

/// Pairwise (tree) sum with a fixed split order.
double pairwise_sum(std::span<const double> values);

}  // namespace balanced
