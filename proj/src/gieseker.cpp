#include "balanced/gieseker.hpp"

#include <cmath>
#include <sstream>

#include "balanced/errors.hpp"

namespace balanced {

std::vector<std::vector<int>> lexicographic_subsets(int n, int r) {
  std::vector<std::vector<int>> out;
  if (r < 0 || r > n) return out;
  std::vector<int> idx(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

namespace {

Complex minor_det(const Matrix& a, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int r = static_cast<int>(rows.size());
  Matrix sub(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) sub(i, j) = a(rows[i], cols[j]);
  }
  return r == 0 ? Complex(1.0, 0.0) : sub.determinant();
}

std::vector<std::size_t> sample_nodes(const SectionBasis& basis, std::size_t count) {
  // prefer nodes with |z_i| <= 2 to keep the monomial matrix well scaled
  std::vector<std::size_t> candidates;
  const auto& pts = basis.points();
  for (std::size_t q = 0; q < pts.size(); ++q) {
    if (std::abs(pts[q].z1) <= 2.0 && std::abs(pts[q].z2) <= 2.0) candidates.push_back(q);
  }
  if (candidates.size() < count) {
    candidates.resize(pts.size());
    for (std::size_t q = 0; q < pts.size(); ++q) candidates[q] = q;
  }
  if (candidates.size() < count) {
    fail(ErrorKind::Construction, "not enough sample nodes for the Gieseker solve");
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(candidates[i * candidates.size() / count]);
  return out;
}

}  // namespace

Matrix compound_matrix(const Matrix& a, int r) {
  const auto rows = lexicographic_subsets(static_cast<int>(a.rows()), r);
  const auto cols = lexicographic_subsets(static_cast<int>(a.cols()), r);
  Matrix c(rows.size(), cols.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t i = 0; i < cols.size(); ++i) c(j, i) = minor_det(a, rows[j], cols[i]);
  }
  return c;
}

int GiesekerPoint::matrix_rank() const {
  Eigen::JacobiSVD<Matrix> svd(matrix);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-10 * sv(0)) ++rank;
  }
  return rank;
}

GiesekerPoint gieseker_point(const SectionBasis& basis) {
  GiesekerPoint t;
  t.determinant = basis.bundle().determinant();
  t.rank = basis.rank();
  t.dim = basis.dim();
  t.subsets = lexicographic_subsets(t.dim, t.rank);
  const int m = t.determinant.dim();
  const auto samples = sample_nodes(basis, 2 * static_cast<std::size_t>(m));

  Matrix monomials(samples.size(), m);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    monomials.row(i) = evaluate_in_chart(
        t.determinant, homogeneous_of(basis.manifold(), basis.points()[samples[i]]), 0);
  }
  const Eigen::ColPivHouseholderQR<Matrix> qr(monomials);
  if (qr.rank() != m) fail(ErrorKind::Construction, "sample nodes are not unisolvent");

  std::vector<int> all_rows(t.rank);
  for (int i = 0; i < t.rank; ++i) all_rows[i] = i;

  t.matrix.resize(m, t.subsets.size());
  for (std::size_t col = 0; col < t.subsets.size(); ++col) {
    Vector rhs(samples.size());
    double hadamard = 0.0;  // bounds |minor| so cancelling wedges are judged fairly
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const Matrix& s = basis.evals(samples[i]);
      rhs(i) = minor_det(s, all_rows, t.subsets[col]);
      double bound = 1.0;
      for (int c : t.subsets[col]) bound *= s.col(c).norm();
      hadamard += bound * bound;
    }
    const Vector coeffs = qr.solve(rhs);
    const double scale =
        std::max({rhs.norm(), monomials.norm() * coeffs.norm(), std::sqrt(hadamard)});
    const double resid = (monomials * coeffs - rhs).norm();
    const double rel = scale > 0.0 ? resid / scale : 0.0;
    t.solve_residual = std::max(t.solve_residual, rel);
    if (rel > 1e-10) {
      std::ostringstream os;
      os << "minor of subset " << col << " is not a section of " << t.determinant.to_string()
         << " (relative residual " << rel << ")";
      fail(ErrorKind::Construction, os.str());
    }
    t.matrix.col(col) = coeffs;
  }
  return t;
}

Matrix act(const GiesekerPoint& t, const Matrix& sigma) {
  if (sigma.rows() != t.dim || sigma.cols() != t.dim) {
    fail(ErrorKind::InvalidInput, "group element must be N x N");
  }
  return t.matrix * compound_matrix(sigma, t.rank);
}

std::vector<double> kempf_ness_profile(const GiesekerPoint& t, const Matrix& direction,
                                       const std::vector<double>& ts) {
  if (direction.rows() != t.dim || direction.cols() != t.dim) {
    fail(ErrorKind::InvalidInput, "direction must be N x N");
  }
  const double scale = std::max(1.0, direction.cwiseAbs().maxCoeff());
  if ((direction - direction.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    fail(ErrorKind::InvalidInput, "direction must be Hermitian");
  }
  if (std::abs(direction.trace()) > 1e-10 * scale * t.dim) {
    fail(ErrorKind::InvalidInput, "direction must be traceless");
  }
  // exp(tL) = U exp(tD) U^dagger and the Frobenius norm is unitarily
  // invariant, so ||T C(exp(tL))||^2 = sum_I exp(2t sum_{i in I} d_i) c_I.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(direction));
  const Matrix rotated = t.matrix * compound_matrix(eig.eigenvectors(), t.rank);
  const auto& d = eig.eigenvalues();
  std::vector<double> weight, exponent;
  for (std::size_t i = 0; i < t.subsets.size(); ++i) {
    const double c = rotated.col(i).squaredNorm();
    if (c == 0.0) continue;
    double e = 0.0;
    for (int k : t.subsets[i]) e += d(k);
    weight.push_back(std::log(c));
    exponent.push_back(2.0 * e);
  }
  std::vector<double> out;
  out.reserve(ts.size());
  for (double x : ts) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < weight.size(); ++i) top = std::max(top, weight[i] + x * exponent[i]);
    double acc = 0.0;
    for (std::size_t i = 0; i < weight.size(); ++i) acc += std::exp(weight[i] + x * exponent[i] - top);
    out.push_back(top + std::log(acc));
  }
  return out;
}

}  // namespace balanced
