#include "shapegeo/hilbert.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace shapegeo {

namespace {

constexpr double kUnitTolerance = 1e-9;

void require_unit(const Vec& x, const char* op) {
  if (!x.allFinite() || std::abs(x.norm() - 1.0) > kUnitTolerance) {
    throw InvalidArgument(std::string(op) + ": unit vector required");
  }
}

void require_dim(const EllipsoidSpec& spec, const Vec& x, const char* op) {
  if (x.size() != spec.m) throw InvalidArgument(std::string(op) + ": dimension mismatch");
}

// Fourth-order differences of the node sequence on a uniform grid.
std::vector<Vec> time_derivative(const std::vector<Vec>& x, double dt) {
  const int T = static_cast<int>(x.size()) - 1;
  std::vector<Vec> d(x.size());
  if (T < 4) {
    for (int i = 0; i <= T; ++i) {
      const int lo = std::max(0, i - 1), hi = std::min(T, i + 1);
      d[i] = (x[hi] - x[lo]) / ((hi - lo) * dt);
    }
    return d;
  }
  const double s = 1.0 / (12.0 * dt);
  d[0] = s * (-25.0 * x[0] + 48.0 * x[1] - 36.0 * x[2] + 16.0 * x[3] - 3.0 * x[4]);
  d[1] = s * (-3.0 * x[0] - 10.0 * x[1] + 18.0 * x[2] - 6.0 * x[3] + x[4]);
  for (int i = 2; i <= T - 2; ++i) d[i] = s * (x[i - 2] - 8.0 * x[i - 1] + 8.0 * x[i + 1] - x[i + 2]);
  d[T - 1] = -s * (-3.0 * x[T] - 10.0 * x[T - 1] + 18.0 * x[T - 2] - 6.0 * x[T - 3] + x[T - 4]);
  d[T] = -s * (-25.0 * x[T] + 48.0 * x[T - 1] - 36.0 * x[T - 2] + 16.0 * x[T - 3] - 3.0 * x[T - 4]);
  return d;
}

double simpson(const std::vector<double>& f, double dt) {
  const int T = static_cast<int>(f.size()) - 1;
  if (T == 1) return 0.5 * dt * (f[0] + f[1]);
  auto composite = [&](int end) {
    double s = f[0] + f[end];
    for (int i = 1; i < end; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return s * dt / 3.0;
  };
  if (T % 2 == 0) return composite(T);
  const double tail = 3.0 * dt / 8.0 * (f[T - 3] + 3.0 * f[T - 2] + 3.0 * f[T - 1] + f[T]);
  return (T > 3 ? composite(T - 3) : 0.0) + tail;
}

double weighted_path_length(const Vec& axes, const Path& c) {
  std::vector<Vec> nodes;
  nodes.reserve(c.points().size());
  for (const auto& p : c.points()) {
    if (p.size() != axes.size()) throw InvalidArgument("path length: dimension mismatch");
    const double r = p.norm();
    if (!(r > 0.0)) throw InvalidArgument("path length: node at the origin");
    nodes.push_back(p / r);
  }
  const auto d = time_derivative(nodes, c.dt());
  std::vector<double> f(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) f[i] = axes.cwiseProduct(d[i]).norm();
  return simpson(f, c.dt());
}

}  // namespace

EllipsoidSpec::EllipsoidSpec(int m_) : m(m_), axes(m_) {
  if (m < 2) throw InvalidArgument("EllipsoidSpec: m must be >= 2");
  axes[0] = 1.0;
  for (int n = 1; n < m; ++n) axes[n] = 1.0 + std::ldexp(1.0, -n);
}

Vec sphere_chart(const Vec& x0, const Vec& x) {
  require_unit(x0, "sphere_chart");
  require_unit(x, "sphere_chart");
  if (x0.size() != x.size()) throw InvalidArgument("sphere_chart: dimension mismatch");
  const double c = x.dot(x0);
  if (!(c > 0.0)) throw OutOfChart("sphere_chart: <x, x0> <= 0");
  return x - c * x0;
}

Vec sphere_chart_inverse(const Vec& x0, const Vec& y) {
  require_unit(x0, "sphere_chart_inverse");
  if (x0.size() != y.size()) throw InvalidArgument("sphere_chart_inverse: dimension mismatch");
  const double r2 = y.squaredNorm();
  if (!(r2 < 1.0) || std::abs(y.dot(x0)) > kUnitTolerance) {
    throw OutOfChart("sphere_chart_inverse: need |y| < 1 and <y, x0> = 0");
  }
  return y + std::sqrt(1.0 - r2) * x0;
}

double sphere_distance_analytic(const Vec& x, const Vec& y) {
  require_unit(x, "sphere_distance_analytic");
  require_unit(y, "sphere_distance_analytic");
  if (x.size() != y.size()) throw InvalidArgument("sphere_distance_analytic: dimension mismatch");
  return std::acos(std::clamp(x.dot(y), -1.0, 1.0));
}

Vec ellipsoid_map(const EllipsoidSpec& spec, const Vec& x) {
  require_dim(spec, x, "ellipsoid_map");
  return spec.axes.cwiseProduct(x);
}

Vec ellipsoid_map_inverse(const EllipsoidSpec& spec, const Vec& x) {
  require_dim(spec, x, "ellipsoid_map_inverse");
  return x.cwiseQuotient(spec.axes);
}

double ellipsoid_path_length(const EllipsoidSpec& spec, const Path& c) {
  return weighted_path_length(spec.axes, c);
}

double sphere_path_length(const Path& c) { return weighted_path_length(Vec::Ones(c.dim()), c); }

double half_great_circle_length(const EllipsoidSpec& spec, int n, double tol) {
  if (n < 1 || n >= spec.m) throw InvalidArgument("half_great_circle_length: n out of range");
  const double a2 = spec.axes[n] * spec.axes[n];
  constexpr double pi = std::numbers::pi;
  auto integrand = [a2](double s) {
    const double sn = std::sin(pi * s), cs = std::cos(pi * s);
    return std::sqrt(sn * sn + a2 * cs * cs);
  };
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 15, tol, &err);
  return pi * value;
}

std::vector<GrossmanRow> grossman_experiment(const EllipsoidSpec& spec,
                                             const std::vector<int>& n_list, double tol) {
  std::vector<GrossmanRow> rows;
  rows.reserve(n_list.size());
  for (int n : n_list) {
    rows.push_back({n, half_great_circle_length(spec, n, tol),
                    (1.0 + std::ldexp(1.0, -n)) * std::numbers::pi});
  }
  return rows;
}

Path great_circle_path(const Vec& x, const Vec& y, int n_steps) {
  require_unit(x, "great_circle_path");
  require_unit(y, "great_circle_path");
  if (n_steps < 1) throw InvalidArgument("great_circle_path: n_steps must be >= 1");
  const double theta = sphere_distance_analytic(x, y);
  if (theta == 0.0) return Path::constant(x, n_steps);
  Vec w = y - x.dot(y) * x;
  if (!(w.norm() > 1e-12)) throw InvalidArgument("great_circle_path: antipodal endpoints");
  w.normalize();
  std::vector<Vec> pts;
  for (int i = 0; i <= n_steps; ++i) {
    const double s = theta * i / n_steps;
    pts.push_back(std::cos(s) * x + std::sin(s) * w);
  }
  pts.back() = y;
  return Path(std::move(pts));
}

Path half_great_circle_path(int m, int n, int n_steps) {
  if (n < 1 || n >= m) throw InvalidArgument("half_great_circle_path: n out of range");
  if (n_steps < 1) throw InvalidArgument("half_great_circle_path: n_steps must be >= 1");
  std::vector<Vec> pts;
  for (int i = 0; i <= n_steps; ++i) {
    const double s = std::numbers::pi * i / n_steps;
    Vec p = Vec::Zero(m);
    p[0] = std::cos(s);
    p[n] = std::sin(s);
    pts.push_back(std::move(p));
  }
  return Path(std::move(pts));
}

MetricOracle sphere_oracle(int m) {
  if (m < 2) throw InvalidArgument("sphere_oracle: m must be >= 2");
  auto radius2 = [](const Vec& x) {
    const double r2 = x.squaredNorm();
    if (!(r2 > 0.0)) throw InvalidArgument("sphere_oracle: the origin is not in the domain");
    return r2;
  };
  MetricOracle o;
  o.dim = m;
  o.metric = [=](const Vec& x, const Vec& h, const Vec& k) { return h.dot(k) / radius2(x); };
  o.variation = [=](const Vec& x, const Vec& l, const Vec& h, const Vec& k) {
    const double r2 = radius2(x);
    return -2.0 * x.dot(l) * h.dot(k) / (r2 * r2);
  };
  o.lower = [=](const Vec& x, const Vec& h) -> Vec { return h / radius2(x); };
  o.variation_gradient = [=](const Vec& x, const Vec& h, const Vec& k) -> Vec {
    const double r2 = radius2(x);
    return (-2.0 * h.dot(k) / (r2 * r2)) * x;
  };
  o.variation_lower = [=](const Vec& x, const Vec& l, const Vec& h) -> Vec {
    const double r2 = radius2(x);
    return (-2.0 * x.dot(l) / (r2 * r2)) * h;
  };
  o.raise = [=](const Vec& x, const Vec& covector) -> Vec { return radius2(x) * covector; };
  return o;
}

MetricOracle ellipsoid_oracle(const EllipsoidSpec& spec) {
  const Vec a2 = spec.axes.cwiseProduct(spec.axes);
  const int m = spec.m;
  struct Frame {
    double r;
    Vec u;
  };
  auto frame = [](const Vec& x) {
    const double r = x.norm();
    if (!(r > 0.0)) throw InvalidArgument("ellipsoid_oracle: the origin is not in the domain");
    return Frame{r, x / r};
  };
  auto project = [](const Vec& u, const Vec& h) -> Vec { return h - u.dot(h) * u; };

  MetricOracle o;
  o.dim = m;
  o.metric = [=](const Vec& x, const Vec& h, const Vec& k) {
    const auto f = frame(x);
    const Vec ph = project(f.u, h), pk = project(f.u, k);
    return (ph.dot(a2.cwiseProduct(pk)) + f.u.dot(h) * f.u.dot(k)) / (f.r * f.r);
  };
  // With du = P l / r and d(P h) = -(du <u,h> + u <du,h>):
  o.variation = [=](const Vec& x, const Vec& l, const Vec& h, const Vec& k) {
    const auto f = frame(x);
    const double r2 = f.r * f.r;
    const Vec du = project(f.u, l) / f.r;
    const Vec ph = project(f.u, h), pk = project(f.u, k);
    const Vec dph = -(du * f.u.dot(h) + f.u * du.dot(h));
    const Vec dpk = -(du * f.u.dot(k) + f.u * du.dot(k));
    const double g = (ph.dot(a2.cwiseProduct(pk)) + f.u.dot(h) * f.u.dot(k)) / r2;
    const double dnum = dph.dot(a2.cwiseProduct(pk)) + ph.dot(a2.cwiseProduct(dpk)) +
                        du.dot(h) * f.u.dot(k) + f.u.dot(h) * du.dot(k);
    return dnum / r2 - 2.0 * g * x.dot(l) / r2;
  };
  o.lower = [=](const Vec& x, const Vec& h) -> Vec {
    const auto f = frame(x);
    const Vec ph = project(f.u, h);
    return (project(f.u, a2.cwiseProduct(ph)) + f.u.dot(h) * f.u) / (f.r * f.r);
  };
  return o;
}

}  // namespace shapegeo
