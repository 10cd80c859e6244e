#pragma once

#include <string>
#include <vector>

#include "balanced/geometry.hpp"
#include "balanced/types.hpp"

namespace balanced {

/// Built-in holomorphic vector bundles.
///  - LineP1(k): O(k) on P1, basis z^j, j = 0..k.
///  - LineP2(k): O(k) on P2, basis z1^p z2^q with p + q <= k, graded by
///    total degree, z1 exponent descending within a degree.
///  - Sum(a, b): O(a) + O(b) on P1, block basis (z^j, 0) then (0, z^j).
///  - TangentP2: holomorphic tangent bundle of P2, basis described below.
struct BundleId {
  enum class Kind { LineP1, LineP2, Sum, TangentP2 };

  Kind kind = Kind::LineP1;
  int a = 1;
  int b = 0;

  static BundleId line_p1(int k) { return {Kind::LineP1, k, 0}; }
  static BundleId line_p2(int k) { return {Kind::LineP2, k, 0}; }
  static BundleId sum(int a, int b) { return {Kind::Sum, a, b}; }
  static BundleId tangent_p2() { return {Kind::TangentP2, 0, 0}; }

  /// Accepts "LineP1(k)", "LineP2(k)", "Sum(a,b)", "TangentP2".
  static BundleId parse(const std::string& text);
  std::string to_string() const;

  Manifold manifold() const;
  int rank() const;
  int dim() const;
  /// The determinant line bundle, always LineP1(m) or LineP2(m).
  BundleId determinant() const;
  /// Throws invalid-input for degrees < 1.
  void validate() const;

  friend bool operator==(const BundleId&, const BundleId&) = default;
};

/// Values of the reference sections at an arbitrary point, in the local
/// frame of affine chart `chart` (the index of the homogeneous coordinate
/// set to one). `homogeneous` has 2 entries on P1 and 3 on P2 and must
/// have a nonzero entry at `chart`. Returns an r x N matrix.
///
/// TangentP2 uses the vector fields induced by the elementary matrices
/// E_ab of gl(3) for (a, b) in lexicographic order, skipping E_00 (which
/// equals -(E_11 + E_22) modulo the Euler field):
///   E_01, E_02, E_10, E_11, E_12, E_20, E_21, E_22.
/// In chart 0 these are -z1 (z1, z2), -z2 (z1, z2), (1, 0), (z1, 0),
/// (z2, 0), (0, 1), (0, z1), (0, z2).
Matrix evaluate_in_chart(const BundleId& bundle, const Vector& homogeneous, int chart);

/// The r x r matrix g with S_to = g * S_from at the given point.
Matrix chart_transition(const BundleId& bundle, const Vector& homogeneous, int from, int to);

/// Standard Fubini-Study fiber metric of the bundle at a point of chart 0.
Matrix background_metric_at(const BundleId& bundle, const ChartPoint& x);

/// Homogeneous coordinates (1, z1[, z2]) of a chart-0 point.
Vector homogeneous_of(Manifold manifold, const ChartPoint& x);

/// Reference sections evaluated at quadrature nodes (all in chart 0).
class SectionBasis {
 public:
  const BundleId& bundle() const { return bundle_; }
  Manifold manifold() const { return manifold_; }
  int rank() const { return rank_; }
  int dim() const { return dim_; }
  std::size_t size() const { return evals_.size(); }

  /// r x N matrix whose column i is s_i at node q.
  const Matrix& evals(std::size_t q) const { return evals_[q]; }
  /// Background metric h0 at node q.
  const Matrix& frame_weight(std::size_t q) const { return frame_weight_[q]; }
  const std::vector<ChartPoint>& points() const { return points_; }

  /// Same bundle with basis s' = s A (A invertible N x N).
  SectionBasis transformed(const Matrix& a) const;

  /// Smallest singular value of S(x) over all nodes.
  double min_generation_margin() const;

  /// Basis from raw per-node evaluations, for bundles not built in and for
  /// exercising failure paths. Sizes are checked; nothing else is.
  static SectionBasis from_evaluations(const BundleId& bundle, std::vector<ChartPoint> points,
                                       std::vector<Matrix> evals,
                                       std::vector<Matrix> frame_weight);

  friend SectionBasis build_sections(const BundleId& bundle, const QuadratureScheme& q);

 private:
  SectionBasis() = default;

  BundleId bundle_;
  Manifold manifold_ = Manifold::P1;
  int rank_ = 0;
  int dim_ = 0;
  std::vector<ChartPoint> points_;
  std::vector<Matrix> evals_;
  std::vector<Matrix> frame_weight_;
};

SectionBasis build_sections(const BundleId& bundle, const QuadratureScheme& q);

/// h0 at every node.
FiberMetricField background_metric(const SectionBasis& basis);

}  // namespace balanced
