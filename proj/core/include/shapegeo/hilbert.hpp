#pragma once

// Finite truncations of the unit sphere of l^2 and of Grossman's ellipsoid.
// Points are plain vectors x_0..x_{m-1}.

#include <vector>

#include "shapegeo/geodesics.hpp"

namespace shapegeo {

/// Semi-axes a_0 = 1, a_n = 1 + 2^-n (1 <= n < m).
struct EllipsoidSpec {
  explicit EllipsoidSpec(int m = 24);

  int m;
  Vec axes;
};

/// y = x - <x, x0> x0. Both arguments must be unit vectors; OutOfChart when
/// <x, x0> <= 0.
Vec sphere_chart(const Vec& x0, const Vec& x);
/// x = y + sqrt(1 - |y|^2) x0 for |y| < 1 and <y, x0> = 0 (OutOfChart otherwise).
Vec sphere_chart_inverse(const Vec& x0, const Vec& y);

/// arccos of the clamped inner product of two unit vectors.
double sphere_distance_analytic(const Vec& x, const Vec& y);

Vec ellipsoid_map(const EllipsoidSpec& spec, const Vec& x);
Vec ellipsoid_map_inverse(const EllipsoidSpec& spec, const Vec& x);

/// Length of F o c for a path c on the sphere: nodes are renormalised, c' is a
/// fourth-order finite difference in t and the integrand sqrt(sum a_n^2 c_n'^2)
/// is integrated by composite Simpson (3/8 rule on the last panel for odd T).
double ellipsoid_path_length(const EllipsoidSpec& spec, const Path& c);
/// Same quadrature with all semi-axes equal to 1.
double sphere_path_length(const Path& c);

/// Len(F c_n) for the half great circle c_n(t) = cos(pi t) e_0 + sin(pi t) e_n,
/// i.e. pi * integral_0^1 sqrt(sin^2 pi s + a_n^2 cos^2 pi s) ds, by adaptive
/// Gauss-Kronrod quadrature to relative tolerance `tol`.
double half_great_circle_length(const EllipsoidSpec& spec, int n, double tol = 1e-9);

struct GrossmanRow {
  int n = 0;
  double length = 0.0;
  double bound = 0.0;  // (1 + 2^-n) pi
};

std::vector<GrossmanRow> grossman_experiment(const EllipsoidSpec& spec,
                                             const std::vector<int>& n_list, double tol = 1e-9);

/// Great-circle arc from x to y (unit, not antipodal) sampled at n_steps + 1
/// uniform times.
Path great_circle_path(const Vec& x, const Vec& y, int n_steps);
/// Half great circle from e_0 to -e_0 through e_n.
Path half_great_circle_path(int m, int n, int n_steps);

/// Metric <h, k> / |x|^2 on R^m minus the origin. It is the product of a line
/// (log |x|) with the unit sphere, on which the sphere sits totally geodesic,
/// so energy minimisation between unit vectors recovers great circles without
/// a constraint.
MetricOracle sphere_oracle(int m);

/// As sphere_oracle but with the spherical factor carrying the pullback of
/// the Euclidean metric by F:
/// G_x(h, k) = (<F P h, F P k> + <u, h><u, k>) / |x|^2, u = x/|x|, P = 1 - u u^T.
/// On unit-sphere paths its length is Len(F c).
MetricOracle ellipsoid_oracle(const EllipsoidSpec& spec);

}  // namespace shapegeo
