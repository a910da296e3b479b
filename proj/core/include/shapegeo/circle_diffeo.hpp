#pragma once

#include <functional>

#include "shapegeo/periodic.hpp"

namespace shapegeo {

/// Orientation-preserving diffeomorphism of the circle, stored through its lift
/// phi(x) = x + f(x) with f periodic and 1 + f' > 0. The mean of f is kept in
/// [-pi, pi); shifting f by 2pi describes the same circle map.
class CircleDiffeo {
 public:
  /// Throws InvalidArgument if `displacement` is not scalar or 1 + f' <= 0 at a node.
  explicit CircleDiffeo(PeriodicFunction displacement);

  static CircleDiffeo identity(PeriodicGrid grid);
  static CircleDiffeo rotation(PeriodicGrid grid, double angle);
  /// Samples a lift x -> phi(x) on the grid nodes.
  static CircleDiffeo from_lift(PeriodicGrid grid, const std::function<double(double)>& lift);

  const PeriodicGrid& grid() const noexcept { return f_.grid(); }
  const PeriodicFunction& displacement() const noexcept { return f_; }

  /// Lift value x + f(x), spectrally interpolated off the grid.
  double operator()(double x) const { return x + interp_(x); }
  /// phi'(x) = 1 + f'(x).
  double slope(double x) const { return 1.0 + slope_interp_(x); }
  /// Lift values at the grid nodes.
  Vec node_values() const;
  double min_slope() const noexcept { return min_slope_; }

 private:
  PeriodicFunction f_;
  TrigInterpolant interp_;
  TrigInterpolant slope_interp_;
  double min_slope_;
};

/// phi o psi.
CircleDiffeo compose(const CircleDiffeo& phi, const CircleDiffeo& psi);

/// Inverse by per-node monotone bisection (1e-12), then one Newton polish.
CircleDiffeo invert(const CircleDiffeo& phi);

/// Reduces an angle difference to [-pi, pi).
double wrap_angle(double a) noexcept;

/// Sup over grid nodes of the circle distance between phi(x) and psi(x).
double sup_distance(const CircleDiffeo& phi, const CircleDiffeo& psi);

}  // namespace shapegeo
