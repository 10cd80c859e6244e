#pragma once

#include <vector>

#include "balanced/sections.hpp"
#include "balanced/types.hpp"

namespace balanced {

/// r-subsets of {0, ..., n-1} in lexicographic order.
std::vector<std::vector<int>> lexicographic_subsets(int n, int r);

/// r-th compound matrix: entry (J, I) is det A[J, I] over lexicographic
/// r-subsets. Represents the induced action of A on the r-th exterior power.
Matrix compound_matrix(const Matrix& a, int r);

/// Matrix of the map Lambda^r H0(E) -> H0(det E), s_I -> wedge of s_i(x).
/// Rows follow the monomial basis of the determinant bundle (the same
/// ordering as the sections module uses for line bundles), columns follow
/// lexicographic r-subsets of the reference basis.
struct GiesekerPoint {
  Matrix matrix;
  BundleId determinant;
  int rank = 0;  // bundle rank r
  int dim = 0;   // N
  std::vector<std::vector<int>> subsets;
  /// Worst relative residual of the per-column least-squares solves.
  double solve_residual = 0.0;

  /// Numerical rank of `matrix` (relative tolerance 1e-10).
  int matrix_rank() const;
  bool surjective() const { return matrix_rank() == matrix.rows(); }
};

/// Evaluates every r x r minor of S(x) at 2M sample nodes and expresses it in
/// the monomial basis of H0(det E). Throws a construction error when a solve
/// leaves a relative residual above 1e-10.
GiesekerPoint gieseker_point(const SectionBasis& basis);

/// sigma . T = T * compound(sigma).
Matrix act(const GiesekerPoint& t, const Matrix& sigma);

/// f(t) = log ||exp(t L) . T||_F^2 for each t in `ts`. `direction` must be
/// traceless Hermitian N x N.
std::vector<double> kempf_ness_profile(const GiesekerPoint& t, const Matrix& direction,
                                       const std::vector<double>& ts);

}  // namespace balanced
