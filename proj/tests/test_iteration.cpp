#include <cmath>

#include <gtest/gtest.h>

#include "balanced/config.hpp"
#include "balanced/errors.hpp"
#include "balanced/iteration.hpp"
#include "balanced/oracle.hpp"
#include "test_support.hpp"

using namespace balanced;

namespace {

struct Problem {
  QuadratureScheme q;
  SectionBasis basis;
};

Problem make(const BundleId& bundle, int order) {
  QuadratureScheme q = build_quadrature(bundle.manifold(), order);
  SectionBasis basis = build_sections(bundle, q);
  return {std::move(q), std::move(basis)};
}

IterationStep step(double spread, double delta) {
  IterationStep s;
  s.spread = spread;
  s.delta = delta;
  return s;
}

}  // namespace

TEST(BoundednessRadius, Examples) {
  EXPECT_DOUBLE_EQ(boundedness_radius(HermitianForm::identity(3)), 1.0);
  EXPECT_NEAR(boundedness_radius(HermitianForm::diagonal({4.0, 0.25})), 4.0, 1e-14);
  const HermitianForm h = balanced::testing::random_positive_gram(5, 3);
  EXPECT_NEAR(boundedness_radius(h), boundedness_radius(h.scaled(123.0)), 1e-12);
  EXPECT_GE(boundedness_radius(h), 1.0);
}

TEST(Classify, Thresholds) {
  EXPECT_EQ(classify({step(1.0, 1.0), step(1.0, 1e-9)}, 1e-8, 10.0, 100),
            Classification::Converged);
  EXPECT_EQ(classify({step(1.0, 1.0), step(11.0, 1.0)}, 1e-8, 10.0, 100),
            Classification::Diverged);
  EXPECT_EQ(classify({step(1.0, 1.0), step(1.0, 0.5)}, 1e-8, 10.0, 2),
            Classification::MaxIterations);
  // Diverged wins when both fire
  EXPECT_EQ(classify({step(20.0, 1.0), step(1.0, 0.5)}, 1e-8, 10.0, 2),
            Classification::Diverged);
  EXPECT_EQ(classify({step(20.0, 1e-12)}, 1e-8, 10.0, 5), Classification::Diverged);
}

TEST(Run, FixedPointConvergesImmediately) {
  const Problem p = make(BundleId::line_p1(2), 6);
  const HermitianForm star = oracle::balanced_gram_line_p1(2);
  const auto [result, trace] = run(star, p.basis, p.q);
  EXPECT_EQ(result.classification, Classification::Converged);
  EXPECT_LE(result.iterations, 2);
  EXPECT_LE(operator_norm(result.final_gram.gram() - star.gram()), 100 * p.q.eps_quad());
  EXPECT_LT(result.bergman_sup_residual, 1e-10);
}

TEST(Run, PerturbedStartReachesBalancedPoint) {
  const Problem p = make(BundleId::line_p1(2), 6);
  const HermitianForm target = normalize(oracle::balanced_gram_line_p1(2));
  const auto [result, trace] = run(random_initial_gram(3, 0.2, 7), p.basis, p.q);
  ASSERT_EQ(result.classification, Classification::Converged);
  EXPECT_LT(operator_norm(normalize(result.final_gram).gram() - target.gram()), 1e-6);
  // det(H_{n+1} H_n^{-1}) -> 1
  EXPECT_LT(std::abs(trace.back().det_ratio - 1.0), 10 * 1e-8);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    EXPECT_LE(trace[i].z_tilde, trace[i - 1].z_tilde + 100 * p.q.eps_quad());
    EXPECT_LE(trace[i].log_det, trace[i - 1].log_det + 100 * p.q.eps_quad());
  }
  for (const auto& s : trace) EXPECT_LE(s.trace_residual, 100 * p.q.eps_quad());
}

TEST(Run, ScaleEquivariant) {
  const Problem p = make(BundleId::line_p1(3), 6);
  const HermitianForm h0 = random_initial_gram(4, 0.3, 11);
  IterationOptions opts;
  opts.max_iter = 30;
  const auto [a, ta] = run(h0, p.basis, p.q, opts);
  const auto [b, tb] = run(h0.scaled(1e3), p.basis, p.q, opts);
  EXPECT_EQ(a.classification, b.classification);
  ASSERT_EQ(ta.size(), tb.size());
  for (std::size_t i = 0; i < ta.size(); ++i) {
    EXPECT_NEAR(ta[i].z_tilde, tb[i].z_tilde, 1e-10);
    EXPECT_NEAR(ta[i].spread, tb[i].spread, 1e-10 * ta[i].spread);
  }
  EXPECT_LT(operator_norm(normalize(a.final_gram).gram() - normalize(b.final_gram).gram()), 1e-10);
}

TEST(Run, UnstableSumDiverges) {
  const Problem p = make(BundleId::sum(1, 3), 6);
  const auto [result, trace] = run(HermitianForm::identity(6), p.basis, p.q);
  EXPECT_EQ(result.classification, Classification::Diverged);
  EXPECT_GT(trace.back().spread, 1e6);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    EXPECT_LE(trace[i].z_tilde, trace[i - 1].z_tilde + 100 * p.q.eps_quad());
  }
}

TEST(Run, MaxIterations) {
  const Problem p = make(BundleId::line_p1(2), 6);
  IterationOptions opts;
  opts.max_iter = 2;
  const auto [result, trace] = run(random_initial_gram(3, 0.5, 1), p.basis, p.q, opts);
  EXPECT_EQ(result.classification, Classification::MaxIterations);
  EXPECT_EQ(result.iterations, 2);
  EXPECT_EQ(trace.size(), 2u);
}

TEST(Run, RejectsBadOptions) {
  const Problem p = make(BundleId::line_p1(1), 3);
  const HermitianForm h = HermitianForm::identity(2);
  EXPECT_THROW(run(h, p.basis, p.q, {0.0, 10.0, 5}), Error);
  EXPECT_THROW(run(h, p.basis, p.q, {1e-8, 1.0, 5}), Error);
  EXPECT_THROW(run(h, p.basis, p.q, {1e-8, 10.0, 0}), Error);
  EXPECT_THROW(run(HermitianForm::identity(3), p.basis, p.q), Error);
}

TEST(Run, DegenerateMidRunIsNumericalFailure) {
  // a basis that loses generation at one node
  const QuadratureScheme q = build_quadrature(Manifold::P1, 3);
  std::vector<Matrix> evals, weights;
  for (std::size_t n = 0; n < q.size(); ++n) {
    evals.push_back(n == 4 ? Matrix{{0.0, 0.0}} : Matrix{{1.0, q.nodes()[n].z1}});
    weights.push_back(Matrix{{1.0}});
  }
  const auto basis =
      SectionBasis::from_evaluations(BundleId::line_p1(1), q.nodes(), evals, weights);
  const auto [result, trace] = run(HermitianForm::identity(2), basis, q);
  EXPECT_EQ(result.classification, Classification::NumericalFailure);
  EXPECT_EQ(result.failure_step, 0);
  EXPECT_NE(result.failure.find("node 4"), std::string::npos);
}
