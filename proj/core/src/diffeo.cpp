#include "shapegeo/diffeo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include "shapegeo/errors.hpp"

namespace shapegeo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_knots(const Vec& knots, std::size_t n_fields) {
  if (knots.size() < 1 || static_cast<std::size_t>(knots.size()) != n_fields) {
    throw InvalidArgument("TimeDependentField: need one field per knot");
  }
  if (knots[0] != 0.0) throw InvalidArgument("TimeDependentField: first knot must be 0");
  for (Eigen::Index i = 0; i < knots.size(); ++i) {
    if (!(knots[i] >= 0.0 && knots[i] <= 1.0)) {
      throw InvalidArgument("TimeDependentField: knots must lie in [0, 1]");
    }
    if (i > 0 && !(knots[i] > knots[i - 1])) {
      throw InvalidArgument("TimeDependentField: knots must increase");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Autonomous flows on the circle

CircleField::CircleField(PeriodicFunction u) : u_(std::move(u)), interp_(u_) {
  if (u_.dim() != 1) throw InvalidArgument("CircleField: scalar field required");
}

CircleField CircleField::sample(PeriodicGrid grid, const std::function<double(double)>& u) {
  return CircleField(PeriodicFunction::sample(grid, u));
}

CircleDiffeo flow_autonomous(const CircleField& u, double t, const OdeOptions& opts) {
  const auto& grid = u.grid();
  const auto rhs = [&u](double, double x) { return u(x); };
  Eigen::MatrixXd disp(1, grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const double x0 = grid.node(j);
    const auto r = integrate_scalar(rhs, x0, 0.0, t, opts);
    if (r.exhausted) throw StepCollapse("flow_autonomous: substep budget exhausted");
    disp(0, j) = r.x - x0;
  }
  try {
    return CircleDiffeo(PeriodicFunction(grid, std::move(disp)));
  } catch (const InvalidArgument& e) {
    throw StepCollapse(std::string("flow_autonomous: sampled flow is not a diffeomorphism: ") +
                       e.what());
  }
}

// ---------------------------------------------------------------------------
// Time-dependent fields

TimeDependentField TimeDependentField::on_circle(Vec knots, std::vector<PeriodicFunction> fields,
                                                 TimeInterpolation rule) {
  require_knots(knots, fields.size());
  TimeDependentField f;
  f.domain_ = FieldDomain::Circle;
  f.rule_ = rule;
  f.knots_ = std::move(knots);
  for (auto& u : fields) {
    if (u.dim() != 1) throw InvalidArgument("TimeDependentField: scalar fields required");
    auto interp = std::make_shared<TrigInterpolant>(u);
    f.slices_.push_back([interp](double x) { return (*interp)(x); });
  }
  return f;
}

TimeDependentField TimeDependentField::on_line(RealWindow window, Vec knots,
                                               std::vector<Vec> samples, TimeInterpolation rule) {
  require_knots(knots, samples.size());
  TimeDependentField f;
  f.domain_ = FieldDomain::Line;
  f.rule_ = rule;
  f.knots_ = std::move(knots);
  f.window_ = window;
  for (auto& s : samples) {
    auto spline = std::make_shared<CubicSpline>(window, std::move(s));
    f.slices_.push_back([spline](double x) {
      return spline->window().contains(x) ? (*spline)(x) : 0.0;
    });
  }
  return f;
}

TimeDependentField TimeDependentField::analytic(FieldDomain domain,
                                                std::function<double(double, double)> u,
                                                Vec breaks) {
  if (!u) throw InvalidArgument("TimeDependentField: empty closed form");
  TimeDependentField f;
  f.domain_ = domain;
  f.closed_form_ = std::move(u);
  f.closed_breaks_ = std::move(breaks);
  return f;
}

double TimeDependentField::forward(double t, double x) const {
  if (closed_form_) return closed_form_(t, x);
  const auto K = knots_.size();
  // last knot with t_k <= t
  Eigen::Index k = 0;
  while (k + 1 < K && knots_[k + 1] <= t) ++k;
  if (rule_ == TimeInterpolation::PiecewiseConstant || k + 1 >= K) return slices_[k](x);
  const double w = (t - knots_[k]) / (knots_[k + 1] - knots_[k]);
  return (1.0 - w) * slices_[k](x) + w * slices_[k + 1](x);
}

double TimeDependentField::operator()(double t, double x) const {
  return reversed_ ? -forward(1.0 - t, x) : forward(t, x);
}

Vec TimeDependentField::breaks() const {
  const Vec& b = closed_form_ ? closed_breaks_ : knots_;
  return reversed_ ? Vec((1.0 - b.array()).matrix()) : b;
}

TimeDependentField TimeDependentField::reversed() const {
  TimeDependentField f = *this;
  f.reversed_ = !reversed_;
  return f;
}

FlowResult flow_time_dependent(const TimeDependentField& u, const Vec& starts,
                               const FlowOptions& opts) {
  FlowResult out;
  out.starts = starts;
  OdeOptions ode = opts.ode;
  if (u.domain() == FieldDomain::Line) {
    if (u.window()) {
      ode.lower_bound = u.window()->lo;
      ode.upper_bound = u.window()->hi;
    } else {
      ode.lower_bound = -opts.escape_radius;
      ode.upper_bound = opts.escape_radius;
    }
  }
  const Vec breaks = u.breaks();
  const auto rhs = [&u](double t, double x) { return u(t, x); };
  Vec final(starts.size());
  double earliest = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < starts.size(); ++j) {
    const auto r = integrate_scalar(rhs, starts[j], 0.0, 1.0, ode, breaks);
    out.substeps += r.substeps;
    if (r.escaped || r.exhausted) {
      out.blow_up = true;
      if (r.t < earliest) {
        earliest = r.t;
        out.blow_up_index = static_cast<int>(j);
      }
      continue;
    }
    final[j] = r.x;
  }
  if (out.blow_up) {
    out.blow_up_time = earliest;
  } else {
    out.final_map = std::move(final);
  }
  return out;
}

FlowResult flow_time_dependent(const TimeDependentField& u, const PeriodicGrid& grid,
                               const FlowOptions& opts) {
  if (u.domain() != FieldDomain::Circle) {
    throw InvalidArgument("flow_time_dependent: grid overload is for circle fields");
  }
  return flow_time_dependent(u, grid.nodes(), opts);
}

CircleDiffeo to_circle_diffeo(const FlowResult& r, const PeriodicGrid& grid) {
  if (!r.final_map) throw InvalidArgument("to_circle_diffeo: flow blew up");
  if (r.final_map->size() != grid.size()) {
    throw InvalidArgument("to_circle_diffeo: flow was not started at the grid nodes");
  }
  Eigen::MatrixXd disp(1, grid.size());
  for (int j = 0; j < grid.size(); ++j) disp(0, j) = (*r.final_map)[j] - grid.node(j);
  return CircleDiffeo(PeriodicFunction(grid, std::move(disp)));
}

// ---------------------------------------------------------------------------
// Exponential-map constructions

Conjugation conjugate_to_rotation(const CircleField& u) {
  const auto& grid = u.grid();
  const int n = grid.size();
  const auto& uv = u.values().values();
  if (!(uv.cwiseAbs().minCoeff() > 1e-8)) {
    throw VanishingField("conjugate_to_rotation: field vanishes (min |u| <= 1e-8)");
  }
  const PeriodicFunction w(grid, uv.cwiseInverse());
  auto coeffs = transform(w).data();
  const double mean = coeffs(0, 0).real();  // (1/2pi) integral dy / u
  const double c = 1.0 / mean;

  // Periodic antiderivative of w - mean, pinned to 0 at x = 0.
  coeffs(0, 0) = 0.0;
  for (int j = 1; j < n; ++j) {
    const int k = wavenumber(j, n);
    coeffs(0, j) = (k == n / 2) ? std::complex<double>(0.0)
                                : coeffs(0, j) / std::complex<double>(0.0, k);
  }
  auto prim = inverse_transform(SpectralCoeffs(grid, std::move(coeffs))).values();
  const double at_zero = TrigInterpolant(PeriodicFunction(grid, prim))(0.0);
  prim = (c * (prim.array() - at_zero)).matrix();
  return {CircleDiffeo(PeriodicFunction(grid, std::move(prim))), c};
}

NoninjectivityDemo exp_noninjectivity_demo(const CircleDiffeo& psi, int n, const OdeOptions& opts) {
  if (n < 1) throw InvalidArgument("exp_noninjectivity_demo: n must be >= 1");
  const auto& grid = psi.grid();
  const double step = kTwoPi / n;
  double defect = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    defect = std::max(defect, std::abs(psi(x + step) - psi(x) - step));
  }
  if (defect > 1e-8) {
    throw NotPeriodic("exp_noninjectivity_demo: psi does not commute with the rotation by 2pi/n");
  }
  const auto inv = invert(psi);
  Eigen::MatrixXd u(1, grid.size());
  for (int j = 0; j < grid.size(); ++j) u(0, j) = step * psi.slope(inv(grid.node(j)));
  CircleField field(PeriodicFunction(grid, std::move(u)));
  auto flow = flow_autonomous(field, 1.0, opts);
  const double err = sup_distance(flow, CircleDiffeo::rotation(grid, step));
  return {std::move(field), std::move(flow), err};
}

CircleDiffeo nonsurjectivity_candidate(PeriodicGrid grid, int n, double eps) {
  if (n < 1) throw InvalidArgument("nonsurjectivity_candidate: n must be >= 1");
  if (!(std::abs(eps) < 2.0 / n)) {
    throw InvalidArgument("nonsurjectivity_candidate: need |eps| < 2/n");
  }
  if (!(std::abs(eps) * n < 1.0)) {
    throw InvalidArgument("nonsurjectivity_candidate: |eps| n >= 1, x + 2pi/n + eps sin(nx) is not "
                          "a diffeomorphism");
  }
  return CircleDiffeo::from_lift(
      grid, [n, eps](double x) { return x + kTwoPi / n + eps * std::sin(n * x); });
}

PeriodicPointReport periodic_point_report(const CircleDiffeo& phi, int n, int samples) {
  if (n < 1 || samples < 4) throw InvalidArgument("periodic_point_report: bad parameters");
  PeriodicPointReport rep;
  auto power = [&](double x) {
    for (int i = 0; i < n; ++i) x = phi(x);
    return x - kTwoPi;
  };
  auto g = [&](double x) { return power(x) - x; };

  const double h = kTwoPi / samples;
  std::vector<double> xs(samples), gs(samples);
  double min_disp = std::numeric_limits<double>::infinity();
  double gmax = 0.0;
  for (int i = 0; i < samples; ++i) {
    xs[i] = (i + 0.5) * h;
    gs[i] = g(xs[i]);
    gmax = std::max(gmax, std::abs(gs[i]));
    min_disp = std::min(min_disp, std::abs(wrap_angle(phi(xs[i]) - xs[i])));
  }
  rep.min_displacement = min_disp;
  if (gmax < 1e-12) {
    rep.degenerate = true;
    return rep;
  }

  bool transversal = true;
  for (int i = 0; i < samples; ++i) {
    const int next = (i + 1) % samples;
    double a = xs[i], b = xs[next] + (next == 0 ? kTwoPi : 0.0);
    double ga = gs[i], gb = gs[next];
    if (ga == 0.0) {
      rep.roots.push_back(a);
      continue;
    }
    if ((ga < 0.0) == (gb < 0.0)) continue;
    for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
      const double m = 0.5 * (a + b);
      const double gm = g(m);
      if ((gm < 0.0) == (ga < 0.0)) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    const double root = std::fmod(0.5 * (a + b), kTwoPi);
    const double d = (g(root + 1e-6) - g(root - 1e-6)) / 2e-6;
    if (!(std::abs(d) > 1e-8)) transversal = false;
    rep.roots.push_back(root);
  }
  std::sort(rep.roots.begin(), rep.roots.end());
  rep.isolated = !rep.roots.empty() && transversal;
  return rep;
}

FalsificationResult falsification_search(const CircleDiffeo& phi, int n, int per_axis,
                                         double half_width) {
  if (n < 1 || per_axis < 1) throw InvalidArgument("falsification_search: bad parameters");
  FalsificationResult best;
  best.best_distance = std::numeric_limits<double>::infinity();
  const auto& grid = phi.grid();
  auto axis = [&](int i, double centre) {
    return per_axis == 1 ? centre : centre - half_width + 2.0 * half_width * i / (per_axis - 1);
  };
  for (int ic = 0; ic < per_axis; ++ic) {
    for (int ia = 0; ia < per_axis; ++ia) {
      for (int ib = 0; ib < per_axis; ++ib) {
        const double c = axis(ic, kTwoPi / n), a = axis(ia, 0.0), b = axis(ib, 0.0);
        const auto u = CircleField::sample(
            grid, [=](double x) { return c + a * std::sin(n * x) + b * std::cos(n * x); });
        ++best.tried;
        double d = 0.0;
        try {
          d = sup_distance(flow_autonomous(u, 1.0), phi);
        } catch (const StepCollapse&) {
          continue;
        }
        if (d < best.best_distance) best = {d, c, a, b, best.tried};
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Diff(R) membership on a window

bool membership_check(const RealWindow& window, const Vec& displacement) {
  if (displacement.size() != window.n) {
    throw InvalidArgument("membership_check: one sample per window node required");
  }
  const double edge = std::max(std::abs(displacement[0]), std::abs(displacement[window.n - 1]));
  if (!(edge < 1e-6)) {
    throw NonDecaying("membership_check: displacement does not decay at the window edges");
  }
  const CubicSpline f(window, displacement);
  for (int j = 0; j < window.n; ++j) {
    if (!(1.0 + f.derivative(window.node(j)) > 0.0)) return false;
  }
  return true;
}

}  // namespace shapegeo
