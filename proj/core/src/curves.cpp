#include "shapegeo/curves.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "shapegeo/errors.hpp"

namespace shapegeo {

namespace {

void require_tangent_shape(const Curve& c, const PeriodicFunction& h, const char* op) {
  if (!(h.grid() == c.grid()) || h.dim() != c.dim()) {
    throw BaseMismatch(std::string(op) + ": tangent grid/dimension does not match base curve");
  }
}

void require_base(const Curve& c, const CurveTangent& t, const char* op) {
  if (&t.base() == &c) return;
  if (!(t.base().grid() == c.grid()) || t.base().dim() != c.dim() ||
      t.base().pos().values() != c.pos().values()) {
    throw BaseMismatch(std::string(op) + ": tangent attached to a different base curve");
  }
}

}  // namespace

double immersion_margin(const PeriodicFunction& pos) {
  return derivative(pos).values().colwise().norm().minCoeff();
}

double immersion_check(const PeriodicFunction& pos) {
  const double eps = immersion_margin(pos);
  if (!(eps > kImmersionTolerance)) {
    throw NotImmersed("curve is not immersed: min |c'| = " + std::to_string(eps));
  }
  return eps;
}

double immersion_check(const Curve& c) { return immersion_check(c.pos()); }

Curve::Curve(PeriodicFunction pos)
    : pos_(std::move(pos)), vel_(derivative(pos_)), speed_(), margin_(0.0) {
  if (pos_.dim() < 2) throw InvalidArgument("Curve: codomain dimension must be >= 2");
  speed_ = vel_.values().colwise().norm().transpose();
  margin_ = speed_.minCoeff();
  if (!(margin_ > kImmersionTolerance)) {
    throw NotImmersed("curve is not immersed: min |c'| = " + std::to_string(margin_));
  }
}

Curve Curve::circle(PeriodicGrid grid, double radius, Vec center) {
  return Curve(PeriodicFunction::sample(grid, 2, [&](double t) {
    Vec p(2);
    p << center[0] + radius * std::cos(t), center[1] + radius * std::sin(t);
    return p;
  }));
}

CurveTangent::CurveTangent(std::shared_ptr<const Curve> base, PeriodicFunction h)
    : base_(std::move(base)), h_(std::move(h)) {
  if (!base_) throw InvalidArgument("CurveTangent: null base curve");
  require_tangent_shape(*base_, h_, "CurveTangent");
}

double l2_metric(const Curve& c, const PeriodicFunction& h, const PeriodicFunction& k) {
  require_tangent_shape(c, h, "l2_metric");
  require_tangent_shape(c, k, "l2_metric");
  const Vec pointwise = h.values().cwiseProduct(k.values()).colwise().sum().transpose();
  return c.grid().spacing() * pointwise.dot(c.speed());
}

double l2_metric(const Curve& c, const CurveTangent& h, const CurveTangent& k) {
  require_base(c, h, "l2_metric");
  require_base(c, k, "l2_metric");
  return l2_metric(c, h.h(), k.h());
}

double l2_metric_variation(const Curve& c, const PeriodicFunction& l, const PeriodicFunction& h,
                           const PeriodicFunction& k) {
  require_tangent_shape(c, l, "l2_metric_variation");
  require_tangent_shape(c, h, "l2_metric_variation");
  require_tangent_shape(c, k, "l2_metric_variation");
  const auto dl = derivative(l);
  const Vec hk = h.values().cwiseProduct(k.values()).colwise().sum().transpose();
  const Vec stretch =
      dl.values().cwiseProduct(c.velocity().values()).colwise().sum().transpose();
  return c.grid().spacing() * (hk.array() * stretch.array() / c.speed().array()).sum();
}

double l2_metric_variation(const Curve& c, const CurveTangent& l, const CurveTangent& h,
                           const CurveTangent& k) {
  require_base(c, l, "l2_metric_variation");
  require_base(c, h, "l2_metric_variation");
  require_base(c, k, "l2_metric_variation");
  return l2_metric_variation(c, l.h(), h.h(), k.h());
}

PeriodicFunction reparametrize(const PeriodicFunction& h, const Reparametrization& r) {
  if (!(r.phi.grid() == h.grid())) {
    throw InvalidArgument("reparametrize: diffeomorphism sampled on a different grid");
  }
  const TrigInterpolant interp(h);
  Eigen::MatrixXd out(h.dim(), h.size());
  for (int j = 0; j < h.size(); ++j) out.col(j) = interp.evaluate(r.phi(h.grid().node(j)));
  return PeriodicFunction(h.grid(), std::move(out));
}

Curve reparametrize(const Curve& c, const Reparametrization& r) {
  return Curve(reparametrize(c.pos(), r));
}

CurveTangent reparametrize_tangent(const CurveTangent& h, const Reparametrization& r) {
  auto base = std::make_shared<const Curve>(reparametrize(h.base(), r));
  return CurveTangent(std::move(base), reparametrize(h.h(), r));
}

PeriodicFunction unit_normal(const Curve& q) {
  if (q.dim() != 2) throw InvalidArgument("unit_normal: planar curve required");
  Eigen::MatrixXd n(2, q.grid().size());
  for (int j = 0; j < q.grid().size(); ++j) {
    const double tx = q.velocity()(0, j) / q.speed()[j];
    const double ty = q.velocity()(1, j) / q.speed()[j];
    n(0, j) = ty;
    n(1, j) = -tx;
  }
  return PeriodicFunction(q.grid(), std::move(n));
}

Curve normal_chart(const Curve& q, const PeriodicFunction& a) {
  if (a.dim() != 1 || !(a.grid() == q.grid())) {
    throw InvalidArgument("normal_chart: scalar offset on the curve's grid required");
  }
  const auto n = unit_normal(q);
  Eigen::MatrixXd out = q.pos().values();
  for (int j = 0; j < q.grid().size(); ++j) out.col(j) += a(0, j) * n.values().col(j);
  return Curve(PeriodicFunction(q.grid(), std::move(out)));
}

}  // namespace shapegeo
