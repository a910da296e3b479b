#include "shapegeo/ode.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "shapegeo/errors.hpp"

namespace shapegeo {

namespace {

template <class F>
double rk4(const F& f, double t, double x, double h) {
  const double k1 = f(t, x);
  const double k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
  const double k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
  const double k4 = f(t + h, x + h * k3);
  return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

OdeResult integrate_scalar(const std::function<double(double, double)>& f, double x0, double t0,
                           double t1, const OdeOptions& opts, const Vec& breaks) {
  if (!(opts.base_step > 0.0) || !(opts.tolerance > 0.0)) {
    throw InvalidArgument("integrate_scalar: base_step and tolerance must be positive");
  }
  OdeResult r;
  r.x = x0;
  r.t = t0;
  if (t1 == t0) return r;
  const double dir = t1 > t0 ? 1.0 : -1.0;

  // Breakpoints strictly inside the interval, in integration order, then t1.
  std::vector<double> stops;
  for (Eigen::Index i = 0; i < breaks.size(); ++i) {
    const double b = breaks[i];
    if ((b - t0) * dir > 0.0 && (t1 - b) * dir > 0.0) stops.push_back(b);
  }
  std::sort(stops.begin(), stops.end(), [dir](double a, double b) { return a * dir < b * dir; });
  stops.push_back(t1);

  double h = opts.base_step;
  double piece_start = t0;
  for (double stop : stops) {
    // Stage times are kept strictly inside the current piece so a field that
    // jumps at a breakpoint is sampled from the correct side.
    constexpr double nudge = 1e-12;
    const double a = piece_start, b = stop;
    const bool can_nudge = std::abs(b - a) > 4.0 * nudge;
    const auto g = [&](double t, double x) {
      if (can_nudge) {
        if ((t - a) * dir < nudge) t = a + dir * nudge;
        if ((b - t) * dir < nudge) t = b - dir * nudge;
      }
      return f(t, x);
    };
    while ((stop - r.t) * dir > 0.0) {
      if (r.substeps >= opts.max_substeps) {
        r.exhausted = true;
        return r;
      }
      const double remaining = std::abs(stop - r.t);
      const bool last = h >= remaining;
      const double step = dir * (last ? remaining : h);
      const double full = rk4(g, r.t, r.x, step);
      const double half = rk4(g, r.t, r.x, 0.5 * step);
      const double two_halves = rk4(g, r.t + 0.5 * step, half, 0.5 * step);
      r.substeps += 3;
      const double scale = std::max(1.0, std::abs(two_halves));
      if (!std::isfinite(two_halves) || std::abs(full - two_halves) > opts.tolerance * scale) {
        h = 0.5 * std::abs(step);
        if (h < 1e-300) {
          r.exhausted = true;
          return r;
        }
        continue;
      }
      r.t = last ? stop : r.t + step;
      r.x = two_halves;
      if (r.x < opts.lower_bound || r.x > opts.upper_bound) {
        r.escaped = true;
        return r;
      }
      h = std::min(opts.base_step, 2.0 * h);
    }
    piece_start = stop;
  }
  return r;
}

RealWindow::RealWindow(double lo_, double hi_, int n_) : lo(lo_), hi(hi_), n(n_) {
  if (!(hi > lo) || n < 4) throw InvalidArgument("RealWindow: need lo < hi and n >= 4");
}

Vec RealWindow::nodes() const {
  Vec x(n);
  for (int j = 0; j < n; ++j) x[j] = node(j);
  return x;
}

CubicSpline::CubicSpline(RealWindow window, Vec values)
    : window_(window), y_(std::move(values)), m_(Vec::Zero(window.n)) {
  if (y_.size() != window_.n || !y_.allFinite()) {
    throw InvalidArgument("CubicSpline: need finite samples at every window node");
  }
  // Natural end conditions; interior rows h/6 m_{i-1} + 2h/3 m_i + h/6 m_{i+1} = rhs.
  const int n = window_.n;
  const double h = window_.spacing();
  const int k = n - 2;
  std::vector<double> c(k), d(k);
  for (int i = 0; i < k; ++i) {
    const double rhs = (y_[i + 2] - 2.0 * y_[i + 1] + y_[i]) / h;
    const double diag = 2.0 * h / 3.0;
    const double off = h / 6.0;
    if (i == 0) {
      c[i] = off / diag;
      d[i] = rhs / diag;
    } else {
      const double denom = diag - off * c[i - 1];
      c[i] = off / denom;
      d[i] = (rhs - off * d[i - 1]) / denom;
    }
  }
  for (int i = k - 1; i >= 0; --i) {
    m_[i + 1] = d[i] - (i + 1 < k ? c[i] * m_[i + 2] : 0.0);
  }
}

double CubicSpline::operator()(double x) const {
  if (!window_.contains(x)) throw InvalidArgument("CubicSpline: point outside the window");
  const double h = window_.spacing();
  const int i = std::min(window_.n - 2, static_cast<int>((x - window_.lo) / h));
  const double a = (window_.node(i + 1) - x) / h;
  const double b = 1.0 - a;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
  if (!window_.contains(x)) throw InvalidArgument("CubicSpline: point outside the window");
  const double h = window_.spacing();
  const int i = std::min(window_.n - 2, static_cast<int>((x - window_.lo) / h));
  const double a = (window_.node(i + 1) - x) / h;
  const double b = 1.0 - a;
  return (y_[i + 1] - y_[i]) / h +
         (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

}  // namespace shapegeo
