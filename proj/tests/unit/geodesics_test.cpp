#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "shapegeo/curve_space.hpp"
#include "shapegeo/geodesics.hpp"
#include "shapegeo/hilbert.hpp"

using namespace shapegeo;
constexpr double kPi = std::numbers::pi;

namespace {

Vec e(int m, int i) { return Vec::Unit(m, i); }

Vec random_unit(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> normal;
  Vec x(m);
  for (int j = 0; j < m; ++j) x[j] = normal(rng);
  return x.normalized();
}

double stacked_norm(const std::vector<Vec>& g) {
  double s = 0.0;
  for (const auto& v : g) s += v.squaredNorm();
  return std::sqrt(s);
}

BvpOptions sphere_bvp() {
  BvpOptions o;
  o.throw_on_nonconvergence = false;
  o.stall_window = 200;
  return o;
}

}  // namespace

TEST(PathEnergy, ConstantPathIsZero) {
  const auto o = euclidean_oracle(3);
  EXPECT_EQ(path_energy(Path::constant(Vec::Ones(3), 10), o), 0.0);
  EXPECT_EQ(path_length(Path::constant(Vec::Ones(3), 10), o), 0.0);
}

TEST(PathEnergy, StraightLineEuclidean) {
  const auto o = euclidean_oracle(3);
  Vec v(3);
  v << 1.0, -2.0, 0.5;
  const auto p = Path::linear(Vec::Zero(3), v, 7);
  EXPECT_NEAR(path_energy(p, o), 0.5 * v.squaredNorm(), 1e-14);
  EXPECT_NEAR(path_length(p, o), v.norm(), 1e-14);
}

TEST(PathEnergy, GreatCircleQuarterOnSphere) {
  const auto o = sphere_oracle(10);
  const auto p = great_circle_path(e(10, 0), e(10, 1), 64);
  EXPECT_NEAR(path_energy(p, o), kPi * kPi / 8.0, 1e-3);
  EXPECT_NEAR(path_length(p, o), kPi / 2.0, 1e-3);
}

TEST(PathLength, TimeWarpKeepsLengthRaisesEnergy) {
  const auto o = euclidean_oracle(2);
  Vec a(2), b(2);
  a << 0.0, 0.0;
  b << 1.0, 1.0;
  std::vector<Vec> pts;
  const int T = 20;
  for (int i = 0; i <= T; ++i) {
    const double s = double(i) / T;
    pts.push_back(a + s * s * (b - a));
  }
  const Path warped(pts);
  const Path uniform = Path::linear(a, b, T);
  EXPECT_NEAR(path_length(warped, o), path_length(uniform, o), 1e-8);
  EXPECT_GT(path_energy(warped, o), path_energy(uniform, o));
}

TEST(EnergyGradient, ZeroOnEuclideanLine) {
  const auto o = euclidean_oracle(4, 2.5);
  const auto p = Path::linear(Vec::Zero(4), Vec::Ones(4), 9);
  EXPECT_LT(stacked_norm(energy_gradient(p, o)), 1e-13);
}

TEST(EnergyGradient, MatchesFiniteDifferencesOnL2CurveSpace) {
  const PeriodicGrid g(16);
  const auto o = l2_curve_oracle(g, 2);
  const auto c0 = Curve::circle(g);
  Vec shift(2);
  shift << 0.5, 0.0;
  const auto c1 = Curve::circle(g, 1.0, shift);
  std::mt19937_64 rng(7);
  auto p = Path::linear(c0.pos().flat(), c1.pos().flat(), 4);
  for (int i = 1; i < p.n_steps(); ++i) {
    p.points()[i] += 0.05 * oracle::random_trig(g, 3, rng, 2).flat();
  }
  const auto grad = energy_gradient(p, o);
  for (int i = 1; i < p.n_steps(); ++i) {
    for (int j = 0; j < p.dim(); j += 3) {
      const double fd = oracle::central(
          [&](double eps) {
            Path q = p;
            q.points()[i][j] += eps;
            return path_energy(q, o);
          },
          1e-6);
      const double an = grad[i - 1][j];
      EXPECT_NEAR(an, fd, 1e-6 * std::max(std::abs(an), 1e-2)) << i << "," << j;
    }
  }
}

TEST(EnergyGradient, MissingVariationNeedsPermission) {
  MetricOracle o;
  o.dim = 2;
  o.metric = [](const Vec& x, const Vec& h, const Vec& k) { return (1.0 + x.squaredNorm()) * h.dot(k); };
  const auto p = Path::linear(Vec::Zero(2), Vec::Ones(2), 4);
  EXPECT_THROW(energy_gradient(p, o), MissingVariation);
  EXPECT_NO_THROW(energy_gradient(p, o, true));
}

TEST(EnergyGradient, GradientNormDecreasesUnderDescentFromPerturbedArc) {
  const int m = 6;
  const auto o = sphere_oracle(m);
  auto init = great_circle_path(e(m, 0), e(m, 1), 16);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (int i = 1; i < 16; ++i) {
    for (int j = 0; j < m; ++j) init.points()[i][j] += 0.02 * normal(rng);
  }
  std::vector<double> norms;
  BvpOptions opts;
  opts.max_iterations = 40;
  opts.throw_on_nonconvergence = false;
  opts.observer = [&](int, double, double gnorm) { norms.push_back(gnorm); };
  bvp_minimize(e(m, 0), e(m, 1), o, init, opts);
  ASSERT_GE(norms.size(), 5u);
  EXPECT_LT(norms.back(), 1e-2 * norms.front());
  // overall trend: a running minimum that keeps improving
  int improvements = 0;
  double best = norms.front();
  for (double v : norms) {
    if (v < best) best = v, ++improvements;
  }
  EXPECT_GE(improvements, int(norms.size()) / 2);
}

TEST(Bvp, CoincidentEndpointsConvergeImmediately) {
  const auto o = sphere_oracle(5);
  const auto r = bvp_minimize(e(5, 2), e(5, 2), o, Path::constant(e(5, 2), 8));
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 0);
  EXPECT_EQ(r.report.energy, 0.0);
}

TEST(Bvp, SpherePairMatchesArccos) {
  std::mt19937_64 rng(9);
  const auto o = sphere_oracle(10);
  const Vec x = random_unit(rng, 10), y = random_unit(rng, 10);
  const auto r = bvp_minimize(x, y, o, Path::linear(x, y, 64), sphere_bvp());
  EXPECT_NEAR(r.report.length, std::acos(x.dot(y)), 1e-3);
}

TEST(Bvp, TranslatedCirclesNoLongerThanLinearPath) {
  const PeriodicGrid g(16);
  const auto o = l2_curve_oracle(g, 2);
  Vec shift(2);
  shift << 0.5, 0.0;
  const Vec a = Curve::circle(g).pos().flat(), b = Curve::circle(g, 1.0, shift).pos().flat();
  const auto init = Path::linear(a, b, 6);
  BvpOptions opts;
  opts.max_iterations = 300;
  opts.throw_on_nonconvergence = false;
  const auto r = bvp_minimize(a, b, o, init, opts);
  EXPECT_LE(r.report.length, path_length(init, o) + 1e-12);
}

TEST(Bvp, NonConvergenceCarriesBestPath) {
  const auto o = sphere_oracle(4);
  BvpOptions opts;
  opts.max_iterations = 3;
  const Vec x = e(4, 0), y = e(4, 1);
  const auto init = Path::linear(x, y, 16);
  try {
    bvp_minimize(x, y, o, init, opts);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& ex) {
    EXPECT_FALSE(ex.report().converged);
    EXPECT_LE(path_energy(ex.best(), o), path_energy(init, o));
    EXPECT_EQ(ex.kind(), ErrorKind::NonConvergence);
  }
}

TEST(Ivp, ZeroVelocityStaysPut) {
  const auto o = sphere_oracle(4);
  const auto p = ivp_shoot(e(4, 0), Vec::Zero(4), o, 16);
  for (const auto& x : p.points()) EXPECT_LT((x - e(4, 0)).norm(), 1e-15);
}

TEST(Ivp, EuclideanIsStraight) {
  const auto o = euclidean_oracle(3);
  Vec v(3);
  v << 0.3, -1.0, 2.0;
  const auto p = ivp_shoot(Vec::Zero(3), v, o, 10);
  for (int i = 0; i <= 10; ++i) EXPECT_LT((p[i] - v * (i / 10.0)).norm(), 1e-13);
}

TEST(Ivp, SphereQuarterTurn) {
  const auto o = sphere_oracle(6);
  const auto p = ivp_shoot(e(6, 0), (kPi / 2) * e(6, 1), o, 256);
  EXPECT_LT((p.back() - e(6, 1)).norm(), 1e-4);
}

TEST(Ivp, DegenerateMetricRaisesSingularGram) {
  MetricOracle o;
  o.dim = 2;
  o.metric = [](const Vec&, const Vec& h, const Vec& k) { return h[0] * k[0] + 1e-15 * h[1] * k[1]; };
  o.variation = [](const Vec&, const Vec&, const Vec&, const Vec&) { return 0.0; };
  Vec v(2);
  v << 1.0, 1.0;
  EXPECT_THROW(ivp_shoot(Vec::Zero(2), v, o, 4), SingularGram);
}

TEST(Distance, ZeroOnDiagonalAndArccosOnSphere) {
  const auto o = sphere_oracle(10);
  DistanceStrategy s;
  s.n_steps = 64;
  s.bvp.stall_window = 200;
  EXPECT_EQ(distance_estimate(e(10, 3), e(10, 3), o, s), 0.0);
  std::mt19937_64 rng(10);
  const Vec x = random_unit(rng, 10), y = random_unit(rng, 10);
  EXPECT_NEAR(distance_estimate(x, y, o, s), std::acos(x.dot(y)), 1e-3);
}

TEST(Distance, TriangleInequalityOnSphereTriples) {
  const auto o = sphere_oracle(10);
  DistanceStrategy s;
  s.n_steps = 32;
  s.bvp.stall_window = 200;
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const Vec x = random_unit(rng, 10), y = random_unit(rng, 10), z = random_unit(rng, 10);
    const double xy = distance_estimate(x, y, o, s), yz = distance_estimate(y, z, o, s),
                 xz = distance_estimate(x, z, o, s);
    EXPECT_LE(xz, xy + yz + 1e-3);
  }
}

TEST(Vanishing, FirstRowIsPlainBvpRun) {
  VanishingOptions opts;
  opts.levels = 3;
  opts.teeth_factor = 2;
  opts.min_samples = 16;
  opts.min_steps = 4;
  opts.bvp.max_iterations = 60;
  const auto rows = vanishing_distance_experiment(CurveMetric::L2, opts);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].teeth, 1);

  const PeriodicGrid g(rows[0].n_samples);
  const auto a = Curve::circle(g);
  Vec shift(2);
  shift << opts.shift, 0.0;
  const auto b = Curve::circle(g, 1.0, shift);
  const auto init = sawtooth_homotopy(a, b, 1, opts.amplitude, rows[0].n_steps, opts.sawtooth_terms);
  const auto r = bvp_minimize(a.pos().flat(), b.pos().flat(), l2_curve_oracle(g, 2, opts.speed_floor),
                              init, opts.bvp);
  EXPECT_DOUBLE_EQ(rows[0].length, path_length(r.path, l2_curve_oracle(g, 2)));
}

TEST(Vanishing, RequiresThreeLevels) {
  VanishingOptions opts;
  opts.levels = 2;
  EXPECT_THROW(vanishing_distance_experiment(CurveMetric::L2, opts), InvalidArgument);
}

TEST(Vanishing, FlatControlIsPinnedAtStraightDistance) {
  VanishingOptions opts;
  opts.min_samples = 16;
  opts.min_steps = 4;
  opts.teeth_factor = 2;
  const auto rows = vanishing_distance_experiment(CurveMetric::Flat, opts);
  // flat metric (2 pi / n) sum |h_j|^2: every point moves by 0.5, so the distance is sqrt(2 pi) * 0.5
  for (const auto& r : rows) EXPECT_NEAR(r.length, std::sqrt(2 * kPi) * 0.5, 1e-9);
}
