#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "shapegeo/kernels.hpp"

using namespace shapegeo;
using Eigen::MatrixXd;

TEST(Gram, SingleLandmarkIsIdentity) {
  const auto g = gram_assemble(Kernel::gaussian(0.7), LandmarkConfig(MatrixXd::Constant(2, 1, 0.3)));
  EXPECT_TRUE(g.full().isApprox(MatrixXd::Identity(2, 2), 1e-15));
}

TEST(Gram, TwoLandmarksGaussianEntry) {
  MatrixXd q(2, 2);
  q << 0, 1.2, 0, 0.5;
  const double sigma = 0.8, r2 = 1.2 * 1.2 + 0.25;
  const auto g = gram_assemble(Kernel::gaussian(sigma), LandmarkConfig(q));
  EXPECT_NEAR(g.scalar()(0, 1), std::exp(-r2 / (2 * sigma * sigma)), 1e-15);
  EXPECT_NEAR(g.full()(1, 3), g.scalar()(0, 1), 0.0);
  EXPECT_EQ(g.full()(0, 3), 0.0);
}

TEST(Gram, TenLandmarksPositiveDefinite) {
  std::mt19937_64 rng(11);
  const auto q = oracle::random_landmarks(rng, 2, 10, 1.0, 0.05);
  for (const auto& k : {Kernel::gaussian(1.0), Kernel::sobolev(1), Kernel::sobolev(2)}) {
    EXPECT_GT(gram_assemble(k, LandmarkConfig(q)).min_eigenvalue(), 0.0);
  }
}

TEST(Gram, CoincidentLandmarksRejected) {
  MatrixXd q(2, 3);
  q << 0, 1, 0, 0, 1, 0;
  EXPECT_THROW(LandmarkConfig{q}, DegenerateConfig);
}

TEST(SobolevKernel, ClosedFormsAndGreensFunction) {
  EXPECT_NEAR(sobolev_kernel_eval(1, 0.0, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(sobolev_kernel_eval(1, 0.3, 1.3), 0.5 / std::exp(1.0), 1e-15);
  EXPECT_NEAR(sobolev_kernel_eval(2, 0.0, 0.0), 0.25, 1e-15);
  for (int order : {1, 2}) {
    for (double r : {0.0, 0.4, 1.0, 2.5}) {
      EXPECT_NEAR(sobolev_kernel_eval(order, 0.0, r), oracle::helmholtz_green(order, r), 1e-4)
          << order << " " << r;
    }
  }
}

TEST(SobolevKernel, SymmetricAndOrderChecked) {
  EXPECT_EQ(sobolev_kernel_eval(2, -0.4, 1.1), sobolev_kernel_eval(2, 1.1, -0.4));
  EXPECT_THROW(sobolev_kernel_eval(3, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(Kernel::sobolev(0), InvalidArgument);
}

TEST(HorizontalLift, SingleLandmarkMomentumEqualsVelocity) {
  MatrixXd h(2, 1);
  h << 0.3, -1.1;
  const auto lift = horizontal_lift(Kernel::gaussian(2.0), LandmarkConfig(MatrixXd::Zero(2, 1)), h);
  EXPECT_TRUE(lift.momentum.isApprox(h, 1e-15));
}

TEST(HorizontalLift, FarApartLandmarksDecouple) {
  MatrixXd q(2, 2);
  q << 0, 10, 0, 0;
  MatrixXd h(2, 2);
  h << 1, -2, 0.5, 0.25;
  const auto lift = horizontal_lift(Kernel::gaussian(1.0), LandmarkConfig(q), h);
  EXPECT_LT((lift.momentum - h).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(HorizontalLift, InterpolatesPrescribedVelocities) {
  std::mt19937_64 rng(12);
  const auto q = oracle::random_landmarks(rng, 2, 8, 1.0, 0.2);
  const MatrixXd h = MatrixXd::Random(2, 8);
  const Kernel k = Kernel::gaussian(0.6);
  const auto lift = horizontal_lift(k, LandmarkConfig(q), h);
  for (int i = 0; i < 8; ++i) EXPECT_LT((lift.field(k, q.col(i)) - h.col(i)).norm(), 1e-10);
}

TEST(InducedMetric, SingleLandmarkAndTopEigenvector) {
  const Kernel k = Kernel::gaussian(1.0);
  MatrixXd h(3, 1);
  h << 1, 2, 2;
  EXPECT_NEAR(induced_metric(k, LandmarkConfig(MatrixXd::Zero(3, 1)), h, h), 9.0, 1e-13);

  MatrixXd q(1, 3);
  q << 0, 0.5, 1.3;
  const LandmarkConfig cfg(q);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram_assemble(k, cfg).scalar());
  const MatrixXd v = es.eigenvectors().col(2).transpose();
  EXPECT_NEAR(induced_metric(k, cfg, v, v), 1.0 / es.eigenvalues()[2], 1e-12);
}

TEST(InducedMetric, PositiveForNonzeroVelocities) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const LandmarkConfig q(oracle::random_landmarks(rng, 2, 4, 1.0, 0.1));
    const MatrixXd h = MatrixXd::Random(2, 4);
    EXPECT_GT(induced_metric(Kernel::sobolev(1), q, h, h), 0.0);
  }
}

TEST(VerticalProject, SplitIsOrthogonal) {
  std::mt19937_64 rng(14);
  const Kernel k = Kernel::gaussian(0.8);
  const LandmarkConfig q(oracle::random_landmarks(rng, 2, 4, 1.0, 0.2));
  const KernelExpansion x{oracle::random_landmarks(rng, 2, 6, 1.5, 0.1), MatrixXd::Random(2, 6)};
  const auto split = vertical_project(k, q, x);
  EXPECT_LT(std::abs(split.orthogonality), 1e-10);
  const double total = rkhs_inner(k, x, x);
  const double parts = rkhs_inner(k, split.horizontal, split.horizontal) +
                       rkhs_inner(k, split.vertical, split.vertical);
  EXPECT_NEAR(parts, total, 1e-9 * std::max(1.0, total));
  for (int i = 0; i < q.size(); ++i) EXPECT_LT(split.vertical(k, q.points().col(i)).norm(), 1e-10);
}

TEST(VerticalProject, HorizontalInputHasNoVerticalPart) {
  std::mt19937_64 rng(15);
  const Kernel k = Kernel::gaussian(1.0);
  const LandmarkConfig q(oracle::random_landmarks(rng, 2, 3, 1.0, 0.3));
  const KernelExpansion x{q.points(), MatrixXd::Random(2, 3)};
  const auto split = vertical_project(k, q, x);
  EXPECT_LT(rkhs_inner(k, split.vertical, split.vertical), 1e-20);
  EXPECT_TRUE(split.horizontal.momenta.isApprox(x.momenta, 1e-10));
}

TEST(VerticalProject, MalformedExpansionRejected) {
  const LandmarkConfig q(MatrixXd::Zero(2, 1));
  EXPECT_THROW(vertical_project(Kernel::gaussian(1), q, KernelExpansion{MatrixXd::Zero(3, 2), MatrixXd::Zero(3, 2)}),
               InvalidArgument);
  EXPECT_THROW(vertical_project(Kernel::gaussian(1), q, KernelExpansion{MatrixXd::Zero(2, 2), MatrixXd::Zero(2, 1)}),
               InvalidArgument);
}

TEST(LandmarkOracle, OneDimensionalPairConverges) {
  const auto o = landmark_metric_oracle(Kernel::gaussian(1.0), 1, 2);
  Vec a(2), b(2);
  a << 0.0, 1.0;
  b << 0.5, 1.8;
  std::vector<double> energies;
  BvpOptions opts;
  opts.observer = [&](int, double e, double) { energies.push_back(e); };
  const auto r = bvp_minimize(a, b, o, Path::linear(a, b, 16), opts);
  EXPECT_TRUE(r.report.converged);
  // accepted steps may rise by the line search's rounding slack
  for (std::size_t i = 1; i < energies.size(); ++i)
    EXPECT_LE(energies[i], energies[i - 1] * (1 + 8 * std::numeric_limits<double>::epsilon()));
  EXPECT_LE(r.report.energy, path_energy(Path::linear(a, b, 16), o));
}

TEST(LandmarkOracle, SingleLandmarkMovesStraight) {
  const auto o = landmark_metric_oracle(Kernel::gaussian(1.0), 2, 1);
  Vec a(2), b(2);
  a << -1.0, 0.5;
  b << 2.0, -0.5;
  Path init = Path::linear(a, b, 8);
  for (int i = 1; i < 8; ++i) init.points()[i][1] += 0.3 * std::sin(3.14159 * i / 8);
  const auto r = bvp_minimize(a, b, o, init);
  ASSERT_TRUE(r.report.converged);
  for (int i = 0; i <= 8; ++i) EXPECT_LT((r.path[i] - (a + (b - a) * i / 8.0)).norm(), 1e-6);
  EXPECT_NEAR(r.report.length, (b - a).norm(), 1e-9);
}

TEST(LandmarkOracle, PermutationInvariantLength) {
  std::mt19937_64 rng(16);
  const MatrixXd q0 = oracle::random_landmarks(rng, 2, 3, 1.0, 0.3);
  const MatrixXd q1 = q0 + 0.4 * MatrixXd::Random(2, 3);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(3);
  perm.indices() << 2, 0, 1;
  const auto o = landmark_metric_oracle(Kernel::gaussian(1.0), 2, 3);
  auto flat = [](const MatrixXd& m) { return Vec(Eigen::Map<const Vec>(m.data(), m.size())); };
  const auto r1 = bvp_minimize(flat(q0), flat(q1), o, Path::linear(flat(q0), flat(q1), 12));
  const MatrixXd p0 = q0 * perm, p1 = q1 * perm;
  const auto r2 = bvp_minimize(flat(p0), flat(p1), o, Path::linear(flat(p0), flat(p1), 12));
  EXPECT_NEAR(r1.report.length, r2.report.length, 1e-8);
}

TEST(LandmarkOracle, AnalyticVariationMatchesDifferences) {
  std::mt19937_64 rng(17);
  for (const auto& k : {Kernel::gaussian(0.9), Kernel::sobolev(2)}) {
    const auto o = landmark_metric_oracle(k, 2, 4);
    const Vec x = LandmarkConfig(oracle::random_landmarks(rng, 2, 4, 1.0, 0.3)).flat();
    const Vec l = Vec::Random(8), h = Vec::Random(8), kk = Vec::Random(8);
    const double analytic = o.variation(x, l, h, kk);
    const double fd = oracle::central([&](double e) { return o.metric(x + e * l, h, kk); }, 1e-5);
    EXPECT_NEAR(analytic, fd, 1e-6 * std::max(1.0, std::abs(analytic)));
    EXPECT_NEAR(o.variation_gradient(x, h, kk).dot(l), analytic, 1e-10 * std::max(1.0, std::abs(analytic)));
    EXPECT_NEAR(o.variation_lower(x, l, h).dot(kk), analytic, 1e-10 * std::max(1.0, std::abs(analytic)));
  }
}

TEST(Admissibility, ZeroVelocityAndSingleLandmarkEquality) {
  const Kernel k = Kernel::sobolev(1);
  const LandmarkConfig q1(MatrixXd::Zero(2, 1));
  const auto z = admissibility_bound_check(k, q1, MatrixXd::Zero(2, 1));
  EXPECT_EQ(z.lhs, 0.0);
  EXPECT_EQ(z.rhs, 0.0);
  MatrixXd h(2, 1);
  h << 0.6, -0.8;
  const auto b = admissibility_bound_check(k, q1, h);
  EXPECT_NEAR(b.lhs, b.rhs, 1e-14);
}

TEST(Admissibility, StrictOnRandomConfigurations) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 100; ++trial) {
    const LandmarkConfig q(oracle::random_landmarks(rng, 2, 4, 1.0, 0.1));
    const MatrixXd h = MatrixXd::Random(2, 4);
    const auto b = admissibility_bound_check(Kernel::gaussian(1.0), q, h);
    EXPECT_LT(b.lhs, b.rhs);
  }
}
