#pragma once

// Discretized immersed closed curves with the L2 metric
//   G_c(h, k) = integral <h, k> |c'| dtheta,
// its first variation, the reparametrization action and the normal chart.

#include <memory>

#include "shapegeo/circle_diffeo.hpp"
#include "shapegeo/periodic.hpp"

namespace shapegeo {

inline constexpr double kImmersionTolerance = 1e-10;

/// min_j |c'(theta_j)| without any check.
double immersion_margin(const PeriodicFunction& pos);

/// Returns the margin; throws NotImmersed when it is <= kImmersionTolerance.
double immersion_check(const PeriodicFunction& pos);

class Curve {
 public:
  /// Requires dim >= 2 and an immersion margin above kImmersionTolerance.
  explicit Curve(PeriodicFunction pos);

  const PeriodicFunction& pos() const noexcept { return pos_; }
  const PeriodicFunction& velocity() const noexcept { return vel_; }
  const Vec& speed() const noexcept { return speed_; }
  const PeriodicGrid& grid() const noexcept { return pos_.grid(); }
  int dim() const noexcept { return pos_.dim(); }
  double margin() const noexcept { return margin_; }

  static Curve circle(PeriodicGrid grid, double radius = 1.0, Vec center = Vec::Zero(2));

 private:
  PeriodicFunction pos_;
  PeriodicFunction vel_;
  Vec speed_;
  double margin_;
};

double immersion_check(const Curve& c);

/// Tangent vector h at a base curve.
class CurveTangent {
 public:
  CurveTangent(std::shared_ptr<const Curve> base, PeriodicFunction h);

  const Curve& base() const noexcept { return *base_; }
  const std::shared_ptr<const Curve>& base_ptr() const noexcept { return base_; }
  const PeriodicFunction& h() const noexcept { return h_; }

 private:
  std::shared_ptr<const Curve> base_;
  PeriodicFunction h_;
};

double l2_metric(const Curve& c, const PeriodicFunction& h, const PeriodicFunction& k);
/// Throws BaseMismatch unless both tangents sit at `c`.
double l2_metric(const Curve& c, const CurveTangent& h, const CurveTangent& k);

/// D_{c,l} G(h, k) = integral <h, k> <l', c'> / |c'| dtheta.
double l2_metric_variation(const Curve& c, const PeriodicFunction& l, const PeriodicFunction& h,
                           const PeriodicFunction& k);
double l2_metric_variation(const Curve& c, const CurveTangent& l, const CurveTangent& h,
                           const CurveTangent& k);

/// Reparametrization by an orientation-preserving circle diffeomorphism.
struct Reparametrization {
  CircleDiffeo phi;
};

/// c o phi via trigonometric interpolation of c at phi(theta_j).
Curve reparametrize(const Curve& c, const Reparametrization& r);
PeriodicFunction reparametrize(const PeriodicFunction& h, const Reparametrization& r);
CurveTangent reparametrize_tangent(const CurveTangent& h, const Reparametrization& r);

/// Unit normal used by the normal chart: the unit tangent rotated by -pi/2,
/// i.e. (t_y, -t_x). Points outward for counterclockwise curves.
PeriodicFunction unit_normal(const Curve& q);

/// q + a * n_q for planar q and scalar a; throws NotImmersed if the result
/// fails the immersion check.
Curve normal_chart(const Curve& q, const PeriodicFunction& a);

}  // namespace shapegeo
