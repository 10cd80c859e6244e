#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace balanced {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Manifold { P1, P2 };

const char* to_string(Manifold m);
/// Complex dimension of the manifold (1 for P1, 2 for P2).
int complex_dimension(Manifold m);

/// A point of an affine chart. For P1 only `z1` is meaningful.
struct ChartPoint {
  Complex z1{0.0, 0.0};
  Complex z2{0.0, 0.0};
};

/// Positive-definite Hermitian Gram matrix of an inner product on the
/// section space, in the fixed reference basis. Entry (i, j) is
/// integral of s_i^dagger h s_j, so a change of basis s' = s A acts as
/// A^dagger G A and the pointwise density is S G^{-1} S^dagger.
class HermitianForm {
 public:
  /// Validates hermiticity (1e-13 relative) and positive definiteness;
  /// the stored matrix is the exact Hermitian part of `gram`.
  explicit HermitianForm(Matrix gram);

  static HermitianForm identity(int dim);
  static HermitianForm diagonal(const std::vector<double>& entries);

  int dim() const { return static_cast<int>(gram_.rows()); }
  const Matrix& gram() const { return gram_; }

  double log_det() const;
  double min_eigenvalue() const;
  double max_eigenvalue() const;
  Eigen::VectorXd eigenvalues() const;

  HermitianForm scaled(double c) const;

 private:
  Matrix gram_;
};

/// Per-node r x r Hermitian positive-definite fiber metric.
class FiberMetricField {
 public:
  FiberMetricField(int rank, std::vector<Matrix> values);

  int rank() const { return rank_; }
  std::size_t size() const { return values_.size(); }
  const Matrix& operator[](std::size_t q) const { return values_[q]; }
  const std::vector<Matrix>& values() const { return values_; }

  FiberMetricField scaled(double c) const;

 private:
  int rank_;
  std::vector<Matrix> values_;
};

/// Per-node r x r endomorphism (not necessarily Hermitian).
using EndomorphismField = std::vector<Matrix>;

/// Largest singular value.
double operator_norm(const Matrix& m);

/// Exact Hermitian part (m + m^dagger)/2.
Matrix hermitian_part(const Matrix& m);

}  // namespace balanced
