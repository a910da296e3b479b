#pragma once

// Scalar ODE integration and interpolation on a bounded window of the line.

#include <Eigen/Core>

#include <functional>
#include <limits>

namespace shapegeo {

using Vec = Eigen::VectorXd;

struct OdeOptions {
  double base_step = 1.0 / 256.0;
  /// A step is accepted when one RK4 step and two half steps agree to
  /// tolerance * max(1, |x|); otherwise the step is halved.
  double tolerance = 1e-8;
  long max_substeps = 1L << 20;
  /// Stop as soon as an accepted state leaves [lower_bound, upper_bound].
  double lower_bound = -std::numeric_limits<double>::infinity();
  double upper_bound = std::numeric_limits<double>::infinity();
};

struct OdeResult {
  double x = 0.0;
  double t = 0.0;          // time reached
  bool escaped = false;    // x left [lower_bound, upper_bound] at time t
  bool exhausted = false;  // max_substeps hit before reaching t1
  long substeps = 0;       // RK4 steps taken, accepted or not
};

/// Integrates x' = f(t, x) from (t0, x0) to t1 (either direction) with
/// step-doubling RK4. Steps never straddle the breakpoints in `breaks`, so
/// fields that are only piecewise smooth in t are integrated per piece.
OdeResult integrate_scalar(const std::function<double(double, double)>& f, double x0, double t0,
                           double t1, const OdeOptions& opts = {}, const Vec& breaks = Vec());

/// Uniform nodes lo = x_0 < ... < x_{n-1} = hi.
struct RealWindow {
  RealWindow(double lo = -10.0, double hi = 10.0, int n = 2048);

  double lo, hi;
  int n;

  double spacing() const noexcept { return (hi - lo) / (n - 1); }
  double node(int j) const noexcept { return lo + j * spacing(); }
  Vec nodes() const;
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

/// Natural cubic spline through samples on a RealWindow.
class CubicSpline {
 public:
  CubicSpline(RealWindow window, Vec values);

  const RealWindow& window() const noexcept { return window_; }
  const Vec& values() const noexcept { return y_; }
  /// Throws InvalidArgument outside the window.
  double operator()(double x) const;
  double derivative(double x) const;

 private:
  RealWindow window_;
  Vec y_;
  Vec m_;  // second derivatives at the nodes
};

}  // namespace shapegeo
