#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "shapegeo/kernels.hpp"

using namespace shapegeo;
using Eigen::MatrixXd;

TEST(KernelProperties, GramPositiveDefiniteOnRandomConfigs) {
  std::mt19937_64 rng(600);
  std::uniform_int_distribution<int> count(1, 12), dimd(1, 3);
  for (const auto& k : {Kernel::gaussian(1.0), Kernel::sobolev(1), Kernel::sobolev(2)}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const int d = dimd(rng), n = count(rng);
      const LandmarkConfig q(oracle::random_landmarks(rng, d, n, 2.0, 0.05));
      const auto g = gram_assemble(k, q);
      EXPECT_GT(g.min_eigenvalue(), 0.0);
      EXPECT_TRUE(g.scalar().isApprox(g.scalar().transpose(), 0.0));
    }
  }
}

TEST(KernelProperties, MetricIsMinimalInterpolationEnergy) {
  std::mt19937_64 rng(601);
  for (const auto& k : {Kernel::gaussian(1.0), Kernel::sobolev(2)}) {
    for (int n = 1; n <= 5; ++n) {
      const MatrixXd q = oracle::random_landmarks(rng, 2, n, 1.0, 0.3);
      const MatrixXd h = MatrixXd::Random(2, n);
      const MatrixXd extra = oracle::random_landmarks(rng, 2, 3, 2.0, 0.3);
      const double g = induced_metric(k, LandmarkConfig(q), h, h);
      const double qp = oracle::min_norm_interpolant(k, q, h, extra);
      EXPECT_NEAR(g, qp, 1e-8 * std::max(1.0, g)) << n;
    }
  }
}

TEST(KernelProperties, RigidMotionInvariance) {
  std::mt19937_64 rng(602);
  std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
  for (int trial = 0; trial < 50; ++trial) {
    const MatrixXd q = oracle::random_landmarks(rng, 2, 4, 1.0, 0.2);
    const MatrixXd h = MatrixXd::Random(2, 4);
    const double a = ang(rng);
    Eigen::Matrix2d r;
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    const Eigen::Vector2d b = Eigen::Vector2d::Random();
    const MatrixXd q2 = (r * q).colwise() + b;
    const Kernel k = Kernel::gaussian(0.7);
    EXPECT_NEAR(induced_metric(k, LandmarkConfig(q), h, h), induced_metric(k, LandmarkConfig(q2), r * h, r * h),
                1e-10 * std::max(1.0, induced_metric(k, LandmarkConfig(q), h, h)));
  }
}

TEST(KernelProperties, OpposingVelocitiesCostMoreAsLandmarksMerge) {
  for (const auto& k : {Kernel::gaussian(1.0), Kernel::sobolev(1)}) {
    MatrixXd h(1, 2);
    h << 1.0, -1.0;
    double previous = 0.0;
    for (double r : {3.0, 1.0, 0.3, 0.1, 0.01}) {
      MatrixXd q(1, 2);
      q << 0.0, r;
      const double g = induced_metric(k, LandmarkConfig(q), h, h);
      EXPECT_GT(g, previous) << r;
      previous = g;
    }
  }
}

TEST(KernelProperties, AdmissibilityBoundHolds) {
  std::mt19937_64 rng(603);
  for (const auto& k : {Kernel::gaussian(0.5), Kernel::sobolev(1), Kernel::sobolev(2)}) {
    for (int trial = 0; trial < 200; ++trial) {
      const LandmarkConfig q(oracle::random_landmarks(rng, 2, 5, 1.0, 0.05));
      const auto b = admissibility_bound_check(k, q, MatrixXd::Random(2, 5));
      EXPECT_LE(b.lhs, b.rhs * (1 + 1e-12));
    }
  }
}
