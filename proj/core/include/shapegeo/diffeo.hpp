#pragma once

// Flows of vector fields on the circle and on a window of the line, the
// exponential-map constructions on Diff(S^1), and the finite-window
// membership test for Id + H^q displacements.

#include <functional>
#include <optional>
#include <vector>

#include "shapegeo/circle_diffeo.hpp"
#include "shapegeo/ode.hpp"

namespace shapegeo {

/// Scalar field on the circle (radians per unit time).
class CircleField {
 public:
  explicit CircleField(PeriodicFunction u);
  static CircleField sample(PeriodicGrid grid, const std::function<double(double)>& u);

  const PeriodicGrid& grid() const noexcept { return u_.grid(); }
  const PeriodicFunction& values() const noexcept { return u_; }
  double operator()(double x) const { return interp_(x); }

 private:
  PeriodicFunction u_;
  TrigInterpolant interp_;
};

/// Time-t map of x' = u(x), node by node. Throws StepCollapse when the
/// integrator runs out of substeps or the sampled result is not orientation
/// preserving.
CircleDiffeo flow_autonomous(const CircleField& u, double t, const OdeOptions& opts = {});

enum class TimeInterpolation {
  PiecewiseConstant,  // field k acts on [t_k, t_{k+1})
  PiecewiseLinear,    // linear between knots, constant after the last one
};

enum class FieldDomain { Circle, Line };

/// u(t, x) for t in [0, 1], given by fields at time knots 0 = t_0 < ... < t_K
/// or by a closed form.
class TimeDependentField {
 public:
  static TimeDependentField on_circle(Vec knots, std::vector<PeriodicFunction> fields,
                                      TimeInterpolation rule = TimeInterpolation::PiecewiseConstant);
  /// Samples on the window nodes; the field is taken as 0 outside the window.
  static TimeDependentField on_line(RealWindow window, Vec knots, std::vector<Vec> samples,
                                    TimeInterpolation rule = TimeInterpolation::PiecewiseConstant);
  /// Closed-form field; `breaks` are times where it may be non-smooth in t.
  static TimeDependentField analytic(FieldDomain domain,
                                     std::function<double(double, double)> u,
                                     Vec breaks = Vec());

  double operator()(double t, double x) const;
  FieldDomain domain() const noexcept { return domain_; }
  const std::optional<RealWindow>& window() const noexcept { return window_; }
  /// Times at which the integrator must not step across.
  Vec breaks() const;
  /// t -> -u(1 - t), whose flow undoes this one.
  TimeDependentField reversed() const;

 private:
  TimeDependentField() = default;
  double forward(double t, double x) const;

  FieldDomain domain_ = FieldDomain::Circle;
  TimeInterpolation rule_ = TimeInterpolation::PiecewiseConstant;
  Vec knots_;
  std::vector<std::function<double(double)>> slices_;
  std::function<double(double, double)> closed_form_;
  Vec closed_breaks_;
  std::optional<RealWindow> window_;
  bool reversed_ = false;
};

struct FlowOptions {
  OdeOptions ode;
  /// Escape threshold for closed-form fields on the line. Sampled line fields
  /// escape when a trajectory leaves their window.
  double escape_radius = 1e6;
};

struct FlowResult {
  Vec starts;
  std::optional<Vec> final_map;  // phi(1, starts); empty after blow-up
  bool blow_up = false;
  double blow_up_time = 0.0;  // earliest escape time over the starts
  int blow_up_index = -1;
  long substeps = 0;
};

/// Integrates d/dt phi(t, x) = u(t, phi(t, x)) on [0, 1] from every start.
/// Escape from the domain or exhausting the substep budget is recorded as
/// blow-up rather than thrown.
FlowResult flow_time_dependent(const TimeDependentField& u, const Vec& starts,
                               const FlowOptions& opts = {});
/// Starts at the grid nodes; for circle fields.
FlowResult flow_time_dependent(const TimeDependentField& u, const PeriodicGrid& grid,
                               const FlowOptions& opts = {});

/// CircleDiffeo with lift values final_map at the grid nodes.
CircleDiffeo to_circle_diffeo(const FlowResult& r, const PeriodicGrid& grid);

struct Conjugation {
  CircleDiffeo eta;
  double c;
};

/// eta(x) = c integral_0^x dy / u(y), c = 2pi / integral_0^{2pi} dy / u(y), so
/// that eta o Fl^u_t o eta^{-1} is the rotation by c t. Throws VanishingField
/// when min |u| <= 1e-8 at the nodes.
Conjugation conjugate_to_rotation(const CircleField& u);

struct NoninjectivityDemo {
  CircleField u;
  CircleDiffeo flow;  // exp(u)
  double error;       // sup distance between exp(u) and the rotation by 2pi/n
};

/// u = (2pi/n) psi' o psi^{-1} for psi commuting with the rotation by 2pi/n.
/// Throws NotPeriodic when sup |psi(x + 2pi/n) - psi(x) - 2pi/n| > 1e-8.
NoninjectivityDemo exp_noninjectivity_demo(const CircleDiffeo& psi, int n,
                                           const OdeOptions& opts = {});

/// phi(x) = x + 2pi/n + eps sin(n x) on `grid`. Requires n >= 1 and
/// |eps| < 2/n; it is a diffeomorphism only for |eps| n < 1, and larger eps
/// raise InvalidArgument from the CircleDiffeo check.
CircleDiffeo nonsurjectivity_candidate(PeriodicGrid grid, int n, double eps);

struct PeriodicPointReport {
  double min_displacement = 0.0;  // min_x |phi(x) - x| mod 2pi; > 0 means no fixed point
  bool degenerate = false;        // phi^n = id + 2pi identically (every point periodic)
  std::vector<double> roots;      // zeros of phi^n(x) - x - 2pi in [0, 2pi)
  bool isolated = false;          // finitely many roots, each a transversal crossing
};

/// Dense sampling (half-cell offset) plus bisection on phi^n(x) - x - 2pi.
PeriodicPointReport periodic_point_report(const CircleDiffeo& phi, int n, int samples = 4096);

struct FalsificationResult {
  double best_distance = 0.0;  // min over the family of sup distance to phi
  double best_c = 0.0, best_a = 0.0, best_b = 0.0;
  int tried = 0;
};

/// Searches u = c + a sin(n x) + b cos(n x) over a coarse grid of (c, a, b)
/// around (2pi/n, 0, 0) for exp(u) close to phi.
FalsificationResult falsification_search(const CircleDiffeo& phi, int n, int per_axis = 5,
                                         double half_width = 0.2);

/// 1 + f' > 0 at every node of the window for a displacement f sampled on it.
/// Throws NonDecaying when |f| >= 1e-6 at either end of the window.
bool membership_check(const RealWindow& window, const Vec& displacement);

}  // namespace shapegeo
