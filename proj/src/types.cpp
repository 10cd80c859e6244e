#include "balanced/types.hpp"

#include <cmath>
#include <sstream>

#include "balanced/errors.hpp"

namespace balanced {

const char* to_string(Manifold m) { return m == Manifold::P1 ? "P1" : "P2"; }

int complex_dimension(Manifold m) { return m == Manifold::P1 ? 1 : 2; }

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

namespace {

// Rejects near-singular forms: lambda_min < 1e-300 lambda_max.
void check_positive_definite(const Matrix& gram, const char* what) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo > 0.0) || lo < 1e-300 * hi) {
    std::ostringstream os;
    os << what << " is not positive-definite (min eigenvalue " << lo << ", max " << hi << ")";
    fail(ErrorKind::Conditioning, os.str());
  }
}

}  // namespace

HermitianForm::HermitianForm(Matrix gram) {
  if (gram.rows() != gram.cols() || gram.rows() == 0) {
    fail(ErrorKind::InvalidInput, "Gram matrix must be square and non-empty");
  }
  if (!gram.allFinite()) fail(ErrorKind::NumericalDomain, "Gram matrix has non-finite entries");
  const double scale = gram.cwiseAbs().maxCoeff();
  const double asym = (gram - gram.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-13 * scale) {
    std::ostringstream os;
    os << "Gram matrix is not Hermitian (asymmetry " << asym << ", scale " << scale << ")";
    fail(ErrorKind::InvalidInput, os.str());
  }
  gram_ = hermitian_part(gram);
  check_positive_definite(gram_, "Gram matrix");
}

HermitianForm HermitianForm::identity(int dim) {
  return HermitianForm(Matrix::Identity(dim, dim));
}

HermitianForm HermitianForm::diagonal(const std::vector<double>& entries) {
  Matrix g = Matrix::Zero(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) g(i, i) = entries[i];
  return HermitianForm(std::move(g));
}

double HermitianForm::log_det() const {
  Eigen::LLT<Matrix> llt(gram_);
  if (llt.info() != Eigen::Success) fail(ErrorKind::Conditioning, "Cholesky failed in log_det");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().real().array().log().sum();
}

Eigen::VectorXd HermitianForm::eigenvalues() const {
  return Eigen::SelfAdjointEigenSolver<Matrix>(gram_, Eigen::EigenvaluesOnly).eigenvalues();
}

double HermitianForm::min_eigenvalue() const { return eigenvalues().minCoeff(); }
double HermitianForm::max_eigenvalue() const { return eigenvalues().maxCoeff(); }

HermitianForm HermitianForm::scaled(double c) const {
  if (!(c > 0.0)) fail(ErrorKind::InvalidInput, "scale factor must be positive");
  return HermitianForm(gram_ * c);
}

FiberMetricField::FiberMetricField(int rank, std::vector<Matrix> values)
    : rank_(rank), values_(std::move(values)) {
  for (std::size_t q = 0; q < values_.size(); ++q) {
    Matrix& h = values_[q];
    if (h.rows() != rank_ || h.cols() != rank_) {
      fail(ErrorKind::InvalidInput, "fiber metric has wrong size at node " + std::to_string(q));
    }
    h = hermitian_part(h);
    Eigen::LLT<Matrix> llt(h);
    if (llt.info() != Eigen::Success) {
      fail(ErrorKind::NumericalDomain,
           "fiber metric is not positive-definite at node " + std::to_string(q));
    }
  }
}

FiberMetricField FiberMetricField::scaled(double c) const {
  std::vector<Matrix> out = values_;
  for (auto& h : out) h *= c;
  return FiberMetricField(rank_, std::move(out));
}

}  // namespace balanced
