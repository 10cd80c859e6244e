#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "balanced/core.hpp"
#include "balanced/errors.hpp"
#include "balanced/gieseker.hpp"
#include "test_support.hpp"

using namespace balanced;
using balanced::testing::random_unitary;

namespace {

SectionBasis sections_for(const BundleId& bundle, int order = 4) {
  return build_sections(bundle, build_quadrature(bundle.manifold(), order));
}

Matrix traceless_direction(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  }
  Matrix x = hermitian_part(a);
  x -= (x.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
  return hermitian_part(x);
}

std::vector<double> grid(double lo, double hi, int points) {
  std::vector<double> ts;
  for (int i = 0; i < points; ++i) ts.push_back(lo + (hi - lo) * i / (points - 1));
  return ts;
}

}  // namespace

TEST(Subsets, LexicographicOrder) {
  const auto s = lexicographic_subsets(4, 2);
  ASSERT_EQ(s.size(), 6u);
  EXPECT_EQ(s.front(), (std::vector<int>{0, 1}));
  EXPECT_EQ(s[2], (std::vector<int>{0, 3}));
  EXPECT_EQ(s.back(), (std::vector<int>{2, 3}));
  EXPECT_EQ(lexicographic_subsets(8, 2).size(), 28u);
}

TEST(Compound, IsMultiplicative) {
  const Matrix a = Matrix::Random(5, 5), b = Matrix::Random(5, 5);
  EXPECT_LT((compound_matrix(a * b, 2) - compound_matrix(a, 2) * compound_matrix(b, 2)).norm(),
            1e-12);
  EXPECT_LT((compound_matrix(a, 1) - a).norm(), 1e-15);
}

TEST(Gieseker, LineBundleIsIdentity) {
  for (int k = 1; k <= 4; ++k) {
    const GiesekerPoint t = gieseker_point(sections_for(BundleId::line_p1(k)));
    EXPECT_LT((t.matrix - Matrix::Identity(k + 1, k + 1)).norm(), 1e-12);
    EXPECT_TRUE(t.surjective());
  }
}

TEST(Gieseker, SumOneOne) {
  const GiesekerPoint t = gieseker_point(sections_for(BundleId::sum(1, 1)));
  ASSERT_EQ(t.matrix.rows(), 3);
  ASSERT_EQ(t.matrix.cols(), 6);
  EXPECT_EQ(t.matrix_rank(), 3);
  // basis (1,0), (z,0), (0,1), (0,z): the cross wedges are 1, z, z, z^2,
  // same-block wedges vanish
  Matrix expected = Matrix::Zero(3, 6);
  expected(0, 1) = 1.0;  // {0,2}: 1*1
  expected(1, 2) = 1.0;  // {0,3}: 1*z
  expected(1, 3) = 1.0;  // {1,2}: z*1
  expected(2, 4) = 1.0;  // {1,3}: z*z
  EXPECT_LT((t.matrix - expected).norm(), 1e-12);
}

TEST(Gieseker, TangentP2) {
  const GiesekerPoint t = gieseker_point(sections_for(BundleId::tangent_p2()));
  EXPECT_EQ(t.matrix.rows(), 10);
  EXPECT_EQ(t.matrix.cols(), 28);
  EXPECT_EQ(t.matrix_rank(), 10);
  EXPECT_LE(t.solve_residual, 1e-10);
  // E_10 ^ E_20 = (1,0) ^ (0,1) = 1
  EXPECT_NEAR(std::abs(t.matrix(0, 15) - Complex(1.0, 0.0)), 0.0, 1e-12);
}

TEST(Gieseker, SurjectiveForAllBuiltIns) {
  for (const auto& b : {BundleId::line_p1(1), BundleId::line_p1(4), BundleId::sum(1, 3),
                        BundleId::sum(2, 3), BundleId::line_p2(2), BundleId::tangent_p2()}) {
    EXPECT_TRUE(gieseker_point(sections_for(b)).surjective()) << b.to_string();
  }
}

// s' = s A transforms T(E) by the induced action of A on Lambda^r.
TEST(Gieseker, UnitaryEquivariance) {
  for (const auto& bundle : {BundleId::sum(1, 3), BundleId::tangent_p2(), BundleId::line_p1(3)}) {
    const SectionBasis basis = sections_for(bundle);
    const Matrix a = random_unitary(bundle.dim(), 17);
    const GiesekerPoint t = gieseker_point(basis);
    const GiesekerPoint moved = gieseker_point(basis.transformed(a));
    EXPECT_LT((moved.matrix - act(t, a)).norm(), 1e-10 * t.matrix.norm()) << bundle.to_string();
  }
}

TEST(Gieseker, InconsistentMinorsAreConstructionError) {
  // sections that are not polynomial of the right degree
  const QuadratureScheme q = build_quadrature(Manifold::P1, 4);
  std::vector<Matrix> evals, weights;
  for (const auto& x : q.nodes()) {
    evals.push_back(Matrix{{1.0, std::exp(x.z1)}});
    weights.push_back(Matrix{{1.0}});
  }
  const auto basis = SectionBasis::from_evaluations(BundleId::line_p1(1), q.nodes(), evals, weights);
  try {
    gieseker_point(basis);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Construction);
  }
}

TEST(KempfNess, ZeroDirectionIsConstant) {
  const GiesekerPoint t = gieseker_point(sections_for(BundleId::sum(1, 3)));
  const auto f = kempf_ness_profile(t, Matrix::Zero(6, 6), grid(-3, 3, 7));
  for (double v : f) EXPECT_NEAR(v, f.front(), 1e-14);
  EXPECT_NEAR(f.front(), std::log(t.matrix.squaredNorm()), 1e-13);
}

TEST(KempfNess, MatchesDirectAction) {
  const GiesekerPoint t = gieseker_point(sections_for(BundleId::tangent_p2()));
  const Matrix dir = traceless_direction(8, 5);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(dir);
  const double s = 0.7;
  const Matrix sigma = eig.eigenvectors() *
                       (s * eig.eigenvalues()).array().exp().matrix().cast<Complex>().asDiagonal() *
                       eig.eigenvectors().adjoint();
  const double direct = std::log(act(t, sigma).squaredNorm());
  EXPECT_NEAR(kempf_ness_profile(t, dir, {s})[0], direct, 1e-11);
}

TEST(KempfNess, ProfilesAreConvex) {
  for (const auto& bundle : {BundleId::line_p1(2), BundleId::sum(1, 1), BundleId::tangent_p2()}) {
    const GiesekerPoint t = gieseker_point(sections_for(bundle));
    for (int s = 0; s < 10; ++s) {
      const auto f = kempf_ness_profile(t, traceless_direction(bundle.dim(), 300 + s), grid(-3, 3, 25));
      for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        EXPECT_GE(f[i - 1] - 2 * f[i] + f[i + 1], -1e-12 * std::abs(f[i])) << bundle.to_string();
      }
    }
  }
}

TEST(KempfNess, RejectsBadDirections) {
  const GiesekerPoint t = gieseker_point(sections_for(BundleId::line_p1(2)));
  EXPECT_THROW(kempf_ness_profile(t, Matrix::Identity(3, 3), {0.0}), Error);
  Matrix nonherm = Matrix::Zero(3, 3);
  nonherm(0, 1) = 1.0;
  EXPECT_THROW(kempf_ness_profile(t, nonherm, {0.0}), Error);
  EXPECT_THROW(kempf_ness_profile(t, Matrix::Zero(4, 4), {0.0}), Error);
}

// Along H_t = exp(tL) the functional Z and the profile of exp(-tL/2) acting
// on T(E) are both convex with matching asymptotic slopes; sampled on
// [-3, 3] their difference varies much less than either one does.
TEST(KempfNess, ComparedWithZAlongGeodesic) {
  const BundleId bundle = BundleId::line_p1(2);
  const QuadratureScheme q = build_quadrature(Manifold::P1, 8);
  const SectionBasis basis = build_sections(bundle, q);
  const GiesekerPoint t = gieseker_point(basis);
  const auto ts = grid(-3, 3, 25);
  for (int s = 0; s < 5; ++s) {
    const Matrix dir = traceless_direction(3, 500 + s);
    const auto f = kempf_ness_profile(t, -0.5 * dir, ts);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(dir);
    std::vector<double> z, diff;
    for (double x : ts) {
      const Matrix h = eig.eigenvectors() *
                       (x * eig.eigenvalues()).array().exp().matrix().cast<Complex>().asDiagonal() *
                       eig.eigenvectors().adjoint();
      z.push_back(z_functional(HermitianForm(hermitian_part(h)), basis, q));
    }
    double zmin = 1e300, zmax = -1e300, fmin = 1e300, fmax = -1e300, dmin = 1e300, dmax = -1e300;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (i > 0 && i + 1 < ts.size()) {
        EXPECT_GE(z[i - 1] - 2 * z[i] + z[i + 1], -10 * q.eps_quad());
        EXPECT_GE(f[i - 1] - 2 * f[i] + f[i + 1], -1e-12);
      }
      zmin = std::min(zmin, z[i]);
      zmax = std::max(zmax, z[i]);
      fmin = std::min(fmin, f[i]);
      fmax = std::max(fmax, f[i]);
      dmin = std::min(dmin, z[i] - f[i]);
      dmax = std::max(dmax, z[i] - f[i]);
    }
    EXPECT_LT(dmax - dmin, 0.5 * std::max(zmax - zmin, fmax - fmin));
  }
}
