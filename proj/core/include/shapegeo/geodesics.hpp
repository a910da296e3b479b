#pragma once

// Generic geodesic machinery over any space that exposes its metric through a
// MetricOracle: discrete path energy and length, the energy gradient, the
// boundary-value solver (energy minimisation with fixed endpoints), the
// initial-value solver (time-stepping the geodesic equation with Christoffel
// symbols obtained from a Gram solve) and distance estimates.

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <vector>

#include "shapegeo/errors.hpp"

namespace shapegeo {

using Vec = Eigen::VectorXd;

/// A weak Riemannian metric on an open subset of R^dim, seen through calls.
///
/// Only `metric` is mandatory. `variation` is the directional derivative
/// D_{x,l} G(h, k) of the metric in the base point. The remaining callables
/// are optional fast paths returning covectors in the coordinate basis; when
/// absent they are assembled from `metric` / `variation` one basis vector at a
/// time.
struct MetricOracle {
  int dim = 0;
  std::function<double(const Vec& x, const Vec& h, const Vec& k)> metric;
  std::function<double(const Vec& x, const Vec& l, const Vec& h, const Vec& k)> variation;

  /// k -> G_x(h, k).
  std::function<Vec(const Vec& x, const Vec& h)> lower;
  /// l -> D_{x,l} G(h, k).
  std::function<Vec(const Vec& x, const Vec& h, const Vec& k)> variation_gradient;
  /// k -> D_{x,l} G(h, k).
  std::function<Vec(const Vec& x, const Vec& l, const Vec& h)> variation_lower;
  /// Inverse of `lower`: the vector v with G_x(v, .) = covector. Used only as a
  /// preconditioner by bvp_minimize.
  std::function<Vec(const Vec& x, const Vec& covector)> raise;

  bool has_variation() const noexcept { return static_cast<bool>(variation); }
};

/// G_x(h, .) as a coordinate covector.
Vec lower(const MetricOracle& oracle, const Vec& x, const Vec& h);
/// l -> D_{x,l}G(h, k) as a coordinate covector; central differences of the
/// metric (step 1e-6) when the oracle has no variation and `allow_fd` is set,
/// MissingVariation otherwise.
Vec variation_gradient(const MetricOracle& oracle, const Vec& x, const Vec& h, const Vec& k,
                       bool allow_fd = false);
/// Gram matrix G_x(e_i, e_j) of the coordinate basis.
Eigen::MatrixXd gram_matrix(const MetricOracle& oracle, const Vec& x);

/// Points x_0..x_T at uniform times t_i = i / T in [0, 1].
class Path {
 public:
  explicit Path(std::vector<Vec> points);

  /// Straight segment from x to y with n_steps steps.
  static Path linear(const Vec& x, const Vec& y, int n_steps);
  static Path constant(const Vec& x, int n_steps);

  int n_steps() const noexcept { return static_cast<int>(points_.size()) - 1; }
  double dt() const noexcept { return 1.0 / n_steps(); }
  int dim() const noexcept { return static_cast<int>(points_.front().size()); }
  const std::vector<Vec>& points() const noexcept { return points_; }
  std::vector<Vec>& points() noexcept { return points_; }
  const Vec& operator[](int i) const { return points_[i]; }
  const Vec& front() const { return points_.front(); }
  const Vec& back() const { return points_.back(); }

 private:
  std::vector<Vec> points_;
};

struct GeodesicReport {
  double energy = 0.0;
  double length = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Raised by bvp_minimize when the gradient tolerance is not met; carries the
/// lowest-energy path visited.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, Path best, GeodesicReport report)
      : Error(ErrorKind::NonConvergence, what),
        best_(std::move(best)),
        report_(report) {}

  const Path& best() const noexcept { return best_; }
  const GeodesicReport& report() const noexcept { return report_; }

 private:
  Path best_;
  GeodesicReport report_;
};

/// 1/2 sum_i G(m_i, v_i, v_i) dt with midpoints m_i and difference quotients v_i.
double path_energy(const Path& p, const MetricOracle& oracle);
/// sum_i sqrt(G(m_i, v_i, v_i)) dt.
double path_length(const Path& p, const MetricOracle& oracle);

/// Gradient of path_energy with respect to the interior points (endpoints
/// fixed). Entry i - 1 holds d E / d x_i.
std::vector<Vec> energy_gradient(const Path& p, const MetricOracle& oracle,
                                 bool allow_fd = false);

struct BvpOptions {
  double tolerance = 1e-8;  // on the Euclidean norm of the stacked gradient
  int max_iterations = 20000;
  double armijo_c1 = 1e-4;
  double shrink = 0.5;
  /// Precondition the gradient by the inverse discrete time Laplacian (an
  /// H^1-in-time gradient), after raising each node's covector with the
  /// oracle's `raise` when it has one. Plain steepest descent when false.
  bool precondition = true;
  bool allow_fd = false;
  bool throw_on_nonconvergence = true;
  /// Stop early (unconverged) when the energy has dropped by less than
  /// stall_tolerance * |E| over the last stall_window iterations. 0 disables.
  int stall_window = 0;
  double stall_tolerance = 1e-10;
  /// Called after each accepted step with (iteration, energy, gradient norm).
  std::function<void(int, double, double)> observer = {};
};

struct BvpResult {
  Path path;
  GeodesicReport report;
};

/// Minimises path_energy over paths from `start` to `end`, beginning at `init`
/// (whose endpoints are overwritten by start/end).
BvpResult bvp_minimize(const Vec& start, const Vec& end, const MetricOracle& oracle, Path init,
                       const BvpOptions& opts = {});

struct IvpOptions {
  double condition_limit = 1e12;
  int corrector_iterations = 12;
};

/// Christoffel contraction Gamma_x(v, v), from the Gram solve
/// G(Gamma(v,v), e_j) = D_{x,v}G(v, e_j) - 1/2 D_{x,e_j}G(v, v).
/// Throws SingularGram when the Gram condition number exceeds the limit.
Vec christoffel_contraction(const MetricOracle& oracle, const Vec& x, const Vec& v,
                            double condition_limit = 1e12);

/// Integrates x'' + Gamma(x)(x', x') = 0 on [0, 1] with n_steps steps of a
/// symmetric second-order scheme (Stormer-Verlet with trapezoidal velocity).
Path ivp_shoot(const Vec& x0, const Vec& v0, const MetricOracle& oracle, int n_steps,
               const IvpOptions& opts = {});

/// How distance_estimate builds and refines its path.
struct DistanceStrategy {
  int n_steps = 32;
  BvpOptions bvp = [] {
    BvpOptions b;
    b.throw_on_nonconvergence = false;
    return b;
  }();
  /// Initial path; straight segment when empty.
  std::function<Path(const Vec&, const Vec&, int)> initializer;
};

/// Length of the bvp_minimize result: an upper bound on the geodesic distance.
double distance_estimate(const Vec& x, const Vec& y, const MetricOracle& oracle,
                         const DistanceStrategy& strategy = {});

/// Flat metric G(h, k) = weight * <h, k> on R^dim.
MetricOracle euclidean_oracle(int dim, double weight = 1.0);

}  // namespace shapegeo
