#pragma once

#include "balanced/geometry.hpp"
#include "balanced/sections.hpp"
#include "balanced/types.hpp"

namespace balanced {

/// Fiber metric induced by an inner product on sections:
/// h(x) = (S(x) G^{-1} S(x)^dagger)^{-1}. Throws degenerate-density when
/// the density matrix is singular at some node.
FiberMetricField fs(const HermitianForm& h, const SectionBasis& basis);

/// Normalized L2 inner product (N / (V r)) * integral of s_i^dagger h s_j.
/// Throws conditioning when the result is not positive-definite.
HermitianForm hilb(const FiberMetricField& h, const SectionBasis& basis, const QuadratureScheme& q);

/// T = Hilb o FS.
HermitianForm t_operator(const HermitianForm& h, const SectionBasis& basis,
                         const QuadratureScheme& q);

/// Bergman endomorphism B(x) = S(x) G^{-1} S(x)^dagger h(x), where G is the
/// plain L2 Gram of h (no N / (V r) factor).
EndomorphismField bergman(const FiberMetricField& h, const SectionBasis& basis,
                          const QuadratureScheme& q);

/// sup over nodes of || B(x) - (N / (r V)) Id ||_op.
double bergman_sup_residual(const EndomorphismField& b, int dim, int rank, double volume);

/// integral of log det(h h_ref^{-1}): the I functional of h relative to h_ref.
double energy_i(const FiberMetricField& h, const FiberMetricField& reference,
                const QuadratureScheme& q);
/// I functional relative to the bundle's background metric.
double energy_i(const FiberMetricField& h, const SectionBasis& basis, const QuadratureScheme& q);

/// Z = -I o FS.
double z_functional(const HermitianForm& h, const SectionBasis& basis, const QuadratureScheme& q);

/// Z + (r V / N) log det; invariant under H -> cH.
double z_tilde(const HermitianForm& h, const SectionBasis& basis, const QuadratureScheme& q);

/// det(H)^{-1/N} H.
HermitianForm normalize(const HermitianForm& h);

/// |Tr(T(H) H^{-1}) - N|.
double trace_identity_residual(const HermitianForm& h, const SectionBasis& basis,
                               const QuadratureScheme& q);
/// Same residual for a precomputed image T(H).
double trace_identity_residual(const HermitianForm& h, const HermitianForm& image);

/// Geodesic of the space of inner products through two forms.
///
/// frame() has columns orthonormal for base() that diagonalize the target,
/// frame^dagger * target * frame = diag(exp(exponents)). The point at
/// parameter t is the form with diagonal exp(t * exponents) in that frame.
class GeodesicSpec {
 public:
  GeodesicSpec(const HermitianForm& base, const HermitianForm& target);

  const HermitianForm& base() const { return base_; }
  const Eigen::VectorXd& exponents() const { return exponents_; }
  const Matrix& frame() const { return frame_; }

  HermitianForm at(double t) const;

 private:
  HermitianForm base_;
  Eigen::VectorXd exponents_;
  Matrix frame_;
  Matrix base_factor_;  // L U with base = L L^dagger
};

HermitianForm geodesic(const HermitianForm& h0, const HermitianForm& h1, double t);

}  // namespace balanced
