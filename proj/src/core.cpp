#include "balanced/core.hpp"

#include <cmath>
#include <sstream>

#include "balanced/errors.hpp"

namespace balanced {

namespace {

Eigen::LLT<Matrix> cholesky(const Matrix& m, const char* what) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    fail(ErrorKind::Conditioning, std::string("Cholesky factorization failed for ") + what);
  }
  return llt;
}

double log_det_pd(const Eigen::LLT<Matrix>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
}

void check_sizes(const SectionBasis& basis, const QuadratureScheme& q) {
  if (basis.size() != q.size()) {
    fail(ErrorKind::InvalidInput, "section basis and quadrature have different node counts");
  }
}

// Density S G^{-1} S^dagger at node q, given the Cholesky factor of G.
Matrix density(const Eigen::LLT<Matrix>& gram_llt, const Matrix& s) {
  const Matrix w = gram_llt.matrixL().solve(s.adjoint());
  return hermitian_part(w.adjoint() * w);
}

// Stacked sqrt(w_q) L_q^dagger S_q with h_q = L_q L_q^dagger, so that
// Y^dagger Y = sum_q w_q S_q^dagger h_q S_q.
Matrix weighted_factor(const FiberMetricField& h, const SectionBasis& basis,
                       const QuadratureScheme& q) {
  check_sizes(basis, q);
  if (h.size() != q.size() || h.rank() != basis.rank()) {
    fail(ErrorKind::InvalidInput, "fiber metric does not match the section basis");
  }
  const int r = basis.rank();
  Matrix y(static_cast<Eigen::Index>(q.size()) * r, basis.dim());
  for (std::size_t n = 0; n < q.size(); ++n) {
    Eigen::LLT<Matrix> llt(h[n]);
    if (llt.info() != Eigen::Success) {
      fail(ErrorKind::NumericalDomain,
           "fiber metric is not positive-definite at node " + std::to_string(n));
    }
    const Matrix lower = llt.matrixL();
    y.middleRows(static_cast<Eigen::Index>(n) * r, r) =
        std::sqrt(q.weights()[n]) * (lower.adjoint() * basis.evals(n));
  }
  return y;
}

}  // namespace

FiberMetricField fs(const HermitianForm& h, const SectionBasis& basis) {
  if (h.dim() != basis.dim()) fail(ErrorKind::InvalidInput, "Gram dimension does not match basis");
  const auto llt = cholesky(h.gram(), "Gram matrix");
  const int r = basis.rank();
  std::vector<Matrix> out;
  out.reserve(basis.size());
  for (std::size_t n = 0; n < basis.size(); ++n) {
    const Matrix d = density(llt, basis.evals(n));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(d, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || lo < 1e-300 * hi || !std::isfinite(hi)) {
      std::ostringstream os;
      os << "density matrix is singular at node " << n << " (min eigenvalue " << lo << ")";
      fail(ErrorKind::DegenerateDensity, os.str());
    }
    out.push_back(hermitian_part(d.llt().solve(Matrix::Identity(r, r))));
  }
  return FiberMetricField(r, std::move(out));
}

HermitianForm hilb(const FiberMetricField& h, const SectionBasis& basis,
                   const QuadratureScheme& q) {
  const Matrix y = weighted_factor(h, basis, q);
  const double factor =
      static_cast<double>(basis.dim()) / (q.total_mass() * static_cast<double>(basis.rank()));
  Matrix g = hermitian_part(factor * (y.adjoint() * y));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || lo < 1e-300 * hi) {
    std::ostringstream os;
    os << "Hilb Gram is not positive-definite (min eigenvalue " << lo << ", max " << hi
       << "); quadrature too coarse?";
    fail(ErrorKind::Conditioning, os.str());
  }
  return HermitianForm(std::move(g));
}

HermitianForm t_operator(const HermitianForm& h, const SectionBasis& basis,
                         const QuadratureScheme& q) {
  return hilb(fs(h, basis), basis, q);
}

EndomorphismField bergman(const FiberMetricField& h, const SectionBasis& basis,
                          const QuadratureScheme& q) {
  const Matrix y = weighted_factor(h, basis, q);
  const Matrix l2 = hermitian_part(y.adjoint() * y);
  Eigen::LLT<Matrix> llt(l2);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(l2, Eigen::EigenvaluesOnly);
  if (llt.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    std::ostringstream os;
    os << "L2 Gram is singular (min eigenvalue " << eig.eigenvalues().minCoeff() << ")";
    fail(ErrorKind::Conditioning, os.str());
  }
  EndomorphismField out;
  out.reserve(basis.size());
  for (std::size_t n = 0; n < basis.size(); ++n) {
    out.push_back(density(llt, basis.evals(n)) * h[n]);
  }
  return out;
}

double bergman_sup_residual(const EndomorphismField& b, int dim, int rank, double volume) {
  const double target = static_cast<double>(dim) / (static_cast<double>(rank) * volume);
  double worst = 0.0;
  for (const auto& m : b) {
    worst = std::max(worst, operator_norm(m - target * Matrix::Identity(m.rows(), m.cols())));
  }
  return worst;
}

double energy_i(const FiberMetricField& h, const FiberMetricField& reference,
                const QuadratureScheme& q) {
  if (h.size() != q.size() || reference.size() != q.size() || h.rank() != reference.rank()) {
    fail(ErrorKind::InvalidInput, "fiber metrics do not match the quadrature");
  }
  std::vector<double> vals(q.size());
  for (std::size_t n = 0; n < q.size(); ++n) {
    Eigen::LLT<Matrix> a(h[n]), b(reference[n]);
    if (a.info() != Eigen::Success || b.info() != Eigen::Success) {
      fail(ErrorKind::NumericalDomain,
           "non-positive determinant in log det at node " + std::to_string(n));
    }
    vals[n] = log_det_pd(a) - log_det_pd(b);
  }
  return integrate(q, std::span<const double>(vals));
}

double energy_i(const FiberMetricField& h, const SectionBasis& basis, const QuadratureScheme& q) {
  return energy_i(h, background_metric(basis), q);
}

double z_functional(const HermitianForm& h, const SectionBasis& basis, const QuadratureScheme& q) {
  return -energy_i(fs(h, basis), basis, q);
}

double z_tilde(const HermitianForm& h, const SectionBasis& basis, const QuadratureScheme& q) {
  const double coeff =
      static_cast<double>(basis.rank()) * q.total_mass() / static_cast<double>(basis.dim());
  return z_functional(h, basis, q) + coeff * h.log_det();
}

HermitianForm normalize(const HermitianForm& h) {
  return HermitianForm(h.gram() * std::exp(-h.log_det() / h.dim()));
}

double trace_identity_residual(const HermitianForm& h, const HermitianForm& image) {
  const auto llt = cholesky(h.gram(), "Gram matrix");
  const Complex tr = llt.solve(image.gram()).trace();
  return std::abs(tr - Complex(h.dim(), 0.0));
}

double trace_identity_residual(const HermitianForm& h, const SectionBasis& basis,
                               const QuadratureScheme& q) {
  return trace_identity_residual(h, t_operator(h, basis, q));
}

GeodesicSpec::GeodesicSpec(const HermitianForm& base, const HermitianForm& target)
    : base_(base) {
  if (base.dim() != target.dim()) fail(ErrorKind::InvalidInput, "geodesic endpoints differ in size");
  const auto llt = cholesky(base.gram(), "geodesic base");
  const Matrix lower = llt.matrixL();
  // M = L^{-1} H1 L^{-dagger} = U diag(mu) U^dagger
  const Matrix tmp = lower.triangularView<Eigen::Lower>().solve(target.gram());
  const Matrix m = hermitian_part(
      lower.triangularView<Eigen::Lower>().solve(tmp.adjoint()).adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    fail(ErrorKind::Conditioning, "generalized eigenproblem failed for geodesic");
  }
  exponents_ = eig.eigenvalues().array().log();
  base_factor_ = lower * eig.eigenvectors();
  frame_ = lower.adjoint().triangularView<Eigen::Upper>().solve(eig.eigenvectors());
}

HermitianForm GeodesicSpec::at(double t) const {
  const Eigen::VectorXd d = (t * exponents_).array().exp();
  return HermitianForm(hermitian_part(base_factor_ * d.asDiagonal() * base_factor_.adjoint()));
}

HermitianForm geodesic(const HermitianForm& h0, const HermitianForm& h1, double t) {
  return GeodesicSpec(h0, h1).at(t);
}

}  // namespace balanced
