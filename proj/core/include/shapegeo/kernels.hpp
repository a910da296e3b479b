#pragma once

// Reproducing kernels, the metric they induce on landmark configurations, and
// horizontal/vertical splitting of finite kernel expansions.
//
// Landmark data (configurations, tangents, momenta) are d x N matrices, one
// column per landmark. The geodesic oracle flattens them node-major.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <functional>

#include "shapegeo/errors.hpp"
#include "shapegeo/geodesics.hpp"

namespace shapegeo {

enum class KernelKind { Gaussian, Sobolev };

/// Radial scalar kernel k(x, y) = k(|x - y|), acting on R^d as k * I_d.
class Kernel {
 public:
  /// exp(-r^2 / (2 sigma^2)); k(0) = 1.
  static Kernel gaussian(double sigma);
  /// Green's function of (1 - d^2/dx^2)^order on the line, taken at r / scale:
  /// order 1: e^{-r}/2, order 2: (1 + r) e^{-r}/4. Other orders are rejected.
  static Kernel sobolev(int order, double scale = 1.0);

  KernelKind kind() const noexcept { return kind_; }
  double width() const noexcept { return width_; }  // sigma or scale
  int order() const noexcept { return order_; }

  double profile(double r) const;
  /// d profile / dr divided by r, finite for r > 0.
  double radial_slope(double r) const;
  double at_zero() const { return profile(0.0); }
  double operator()(const Vec& x, const Vec& y) const { return profile((x - y).norm()); }

 private:
  Kernel(KernelKind kind, double width, int order) : kind_(kind), width_(width), order_(order) {}
  KernelKind kind_;
  double width_;
  int order_;
};

/// 1-D Sobolev kernel of order n in {1, 2} at unit scale.
double sobolev_kernel_eval(int n, double x, double y);

/// N >= 1 distinct points in R^d (min pairwise distance > 1e-8).
class LandmarkConfig {
 public:
  explicit LandmarkConfig(Eigen::MatrixXd points);
  static LandmarkConfig from_flat(int dim, const Vec& flat);

  int dim() const noexcept { return static_cast<int>(q_.rows()); }
  int size() const noexcept { return static_cast<int>(q_.cols()); }
  const Eigen::MatrixXd& points() const noexcept { return q_; }
  Vec flat() const;
  double min_separation() const noexcept { return min_sep_; }

 private:
  Eigen::MatrixXd q_;
  double min_sep_;
};

/// K_q = [k(q_i, q_j) I_d], stored through its N x N scalar block pattern and
/// a Cholesky factor of it (no jitter).
class GramMatrix {
 public:
  GramMatrix(const Kernel& k, const LandmarkConfig& q);

  int size() const noexcept { return static_cast<int>(scalar_.rows()); }
  int dim() const noexcept { return dim_; }
  const Eigen::MatrixXd& scalar() const noexcept { return scalar_; }
  /// The full Nd x Nd matrix in node-major order.
  Eigen::MatrixXd full() const;
  double min_eigenvalue() const;

  /// K_q^{-1} h and K_q h for d x N blocks.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& h) const;
  Eigen::MatrixXd apply(const Eigen::MatrixXd& p) const;

 private:
  int dim_;
  Eigen::MatrixXd scalar_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// Throws DegenerateConfig when the Gram matrix is not positive definite.
GramMatrix gram_assemble(const Kernel& k, const LandmarkConfig& q);

/// X(x) = sum_i k(x, c_i) p_i.
struct KernelExpansion {
  Eigen::MatrixXd centres;  // d x M
  Eigen::MatrixXd momenta;  // d x M

  Vec operator()(const Kernel& k, const Vec& x) const;
};

double rkhs_inner(const Kernel& k, const KernelExpansion& a, const KernelExpansion& b);

struct HorizontalLift {
  Eigen::MatrixXd momentum;  // p with K_q p = h
  KernelExpansion field;     // centres q
};

HorizontalLift horizontal_lift(const Kernel& k, const LandmarkConfig& q, const Eigen::MatrixXd& h);

/// <K_q^{-1} h, h2>, the smallest RKHS energy of a field interpolating h.
double induced_metric(const Kernel& k, const LandmarkConfig& q, const Eigen::MatrixXd& h,
                      const Eigen::MatrixXd& h2);

struct VerticalSplit {
  KernelExpansion horizontal;  // expansion over q with the same values on q
  KernelExpansion vertical;    // X - horizontal, vanishing on q
  double orthogonality;        // <horizontal, vertical>_H
};

/// Splits a finite expansion into its part over q and a remainder vanishing on q.
VerticalSplit vertical_project(const Kernel& k, const LandmarkConfig& q, const KernelExpansion& x);

/// Induced metric on flattened configurations of n_landmarks points in R^dim,
/// with the analytic variation -a^T (D_l K) b, a = K^{-1} h, b = K^{-1} k.
/// Coincident landmarks raise DegenerateConfig.
MetricOracle landmark_metric_oracle(const Kernel& k, int dim, int n_landmarks);

struct AdmissibilityBound {
  double lhs;  // max_i |h_i|
  double rhs;  // sqrt(k(0)) sqrt(G(h, h))
};

AdmissibilityBound admissibility_bound_check(const Kernel& k, const LandmarkConfig& q,
                                             const Eigen::MatrixXd& h);

}  // namespace shapegeo
