#include "shapegeo/curve_space.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace shapegeo {

namespace {

struct CurveSample {
  PeriodicFunction vel;
  Vec speed;
};

// `speed` holds sqrt(|c'|^2 + floor^2), which is |c'| for floor = 0.
CurveSample sample_velocity(const PeriodicGrid& grid, int dim, const Vec& x, double floor) {
  auto vel = derivative(PeriodicFunction::from_flat(grid, dim, x));
  Vec speed = vel.values().colwise().norm().transpose();
  if (!(speed.minCoeff() > kImmersionTolerance)) {
    throw NotImmersed("curve-space point is not immersed");
  }
  if (floor > 0.0) speed = (speed.array().square() + floor * floor).sqrt().matrix();
  return {std::move(vel), std::move(speed)};
}

int next_power_of_two(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

MetricOracle l2_curve_oracle(PeriodicGrid grid, int dim, double speed_floor) {
  if (!(speed_floor >= 0.0)) throw InvalidArgument("l2_curve_oracle: speed_floor must be >= 0");
  const double w = grid.spacing();
  const int n = grid.size();
  MetricOracle o;
  o.dim = n * dim;

  o.metric = [=](const Vec& x, const Vec& h, const Vec& k) {
    const auto s = sample_velocity(grid, dim, x, speed_floor);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      sum += h.segment(j * dim, dim).dot(k.segment(j * dim, dim)) * s.speed[j];
    }
    return w * sum;
  };

  o.variation = [=](const Vec& x, const Vec& l, const Vec& h, const Vec& k) {
    const auto s = sample_velocity(grid, dim, x, speed_floor);
    const auto dl = derivative(PeriodicFunction::from_flat(grid, dim, l));
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double hk = h.segment(j * dim, dim).dot(k.segment(j * dim, dim));
      sum += hk * dl.values().col(j).dot(s.vel.values().col(j)) / s.speed[j];
    }
    return w * sum;
  };

  o.lower = [=](const Vec& x, const Vec& h) -> Vec {
    const auto s = sample_velocity(grid, dim, x, speed_floor);
    Vec out(h.size());
    for (int j = 0; j < n; ++j) out.segment(j * dim, dim) = w * s.speed[j] * h.segment(j * dim, dim);
    return out;
  };

  // l -> w sum_j <h_j,k_j> <(D l)_j, c'_j>/|c'_j|; D is antisymmetric, so the
  // covector is -w D(u) with u_j = <h_j,k_j> c'_j/|c'_j|.
  o.variation_gradient = [=](const Vec& x, const Vec& h, const Vec& k) -> Vec {
    const auto s = sample_velocity(grid, dim, x, speed_floor);
    Eigen::MatrixXd u(dim, n);
    for (int j = 0; j < n; ++j) {
      const double hk = h.segment(j * dim, dim).dot(k.segment(j * dim, dim));
      u.col(j) = hk / s.speed[j] * s.vel.values().col(j);
    }
    return -w * derivative(PeriodicFunction(grid, std::move(u))).flat();
  };

  o.variation_lower = [=](const Vec& x, const Vec& l, const Vec& h) -> Vec {
    const auto s = sample_velocity(grid, dim, x, speed_floor);
    const auto dl = derivative(PeriodicFunction::from_flat(grid, dim, l));
    Vec out(h.size());
    for (int j = 0; j < n; ++j) {
      const double stretch = dl.values().col(j).dot(s.vel.values().col(j)) / s.speed[j];
      out.segment(j * dim, dim) = w * stretch * h.segment(j * dim, dim);
    }
    return out;
  };
  return o;
}

MetricOracle flat_curve_oracle(PeriodicGrid grid, int dim) {
  return euclidean_oracle(grid.size() * dim, grid.spacing());
}

double smooth_sawtooth(double x, int terms) {
  double s = 0.0;
  double norm = 0.0;
  for (int m = 1; m <= terms; ++m) {
    const double sign = (m % 2 == 1) ? 1.0 : -1.0;
    s += sign * std::sin(m * x) / m;
    norm += 1.0 / m;
  }
  return s / norm;
}

Path sawtooth_homotopy(const Curve& from, const Curve& to, int teeth, double amplitude,
                       int n_steps, int terms) {
  if (!(from.grid() == to.grid()) || from.dim() != to.dim() || from.dim() != 2) {
    throw InvalidArgument("sawtooth_homotopy: planar curves on a common grid required");
  }
  const auto& grid = from.grid();
  std::vector<Vec> pts;
  pts.reserve(n_steps + 1);
  for (int i = 0; i <= n_steps; ++i) {
    const double t = double(i) / n_steps;
    const Curve mid((1.0 - t) * from.pos() + t * to.pos());
    const auto normal = unit_normal(mid);
    Eigen::MatrixXd v = mid.pos().values();
    const double a = amplitude * std::sin(std::numbers::pi * t);
    for (int j = 0; j < grid.size(); ++j) {
      v.col(j) += a * smooth_sawtooth(teeth * grid.node(j), terms) * normal.values().col(j);
    }
    pts.push_back(PeriodicFunction(grid, std::move(v)).flat());
  }
  pts.front() = from.pos().flat();
  pts.back() = to.pos().flat();
  return Path(std::move(pts));
}

Path refine_path(const Path& p, const PeriodicGrid& from, const PeriodicGrid& to, int n_steps) {
  const int dim = p.dim() / from.size();
  if (dim * from.size() != p.dim()) throw InvalidArgument("refine_path: path does not live on grid");
  std::vector<Vec> pts;
  pts.reserve(n_steps + 1);
  for (int i = 0; i <= n_steps; ++i) {
    const double s = double(i) / n_steps * p.n_steps();
    const int lo = std::min(static_cast<int>(s), p.n_steps() - 1);
    const double frac = s - lo;
    const Vec x = (1.0 - frac) * p[lo] + frac * p[lo + 1];
    pts.push_back(resample(PeriodicFunction::from_flat(from, dim, x), to).flat());
  }
  return Path(std::move(pts));
}

namespace {

// Adds amplitude * sin(pi t) * sawtooth(teeth * theta) along the outward
// normal of the unit circle to the interior nodes of a path of planar curves.
void add_teeth(Path& path, const PeriodicGrid& grid, int teeth, double amplitude, int terms) {
  const int steps = path.n_steps();
  for (int i = 1; i < steps; ++i) {
    const double a = amplitude * std::sin(std::numbers::pi * i / steps);
    Vec& x = path.points()[i];
    for (int j = 0; j < grid.size(); ++j) {
      const double th = grid.node(j);
      const double off = a * smooth_sawtooth(teeth * th, terms);
      x[2 * j] += off * std::cos(th);
      x[2 * j + 1] += off * std::sin(th);
    }
  }
}

}  // namespace

std::vector<VanishingLevel> vanishing_distance_experiment(CurveMetric metric,
                                                          const VanishingOptions& opts) {
  if (opts.levels < 3) throw InvalidArgument("vanishing_distance_experiment: levels must be >= 3");
  if (opts.teeth_factor < 2) throw InvalidArgument("vanishing_distance_experiment: teeth_factor must be >= 2");
  std::vector<VanishingLevel> rows;
  int teeth = 1;
  std::optional<Path> previous;
  std::optional<PeriodicGrid> previous_grid;
  for (int level = 0; level < opts.levels; ++level) {
    const int n_samples =
        std::max(opts.min_samples << level, next_power_of_two(4 * teeth * opts.sawtooth_terms));
    const int n_steps = std::max(opts.min_steps << level, 2 * teeth);
    const PeriodicGrid grid(n_samples);
    const Curve start = Curve::circle(grid);
    Vec centre(2);
    centre << opts.shift, 0.0;
    const Curve end = Curve::circle(grid, 1.0, centre);

    // Minimise with the smoothed weight, report lengths in the true metric.
    const MetricOracle oracle =
        metric == CurveMetric::L2 ? l2_curve_oracle(grid, 2) : flat_curve_oracle(grid, 2);
    const MetricOracle descent = metric == CurveMetric::L2
                                     ? l2_curve_oracle(grid, 2, opts.speed_floor)
                                     : oracle;
    const double amplitude = opts.amplitude / teeth;
    Path init = [&] {
      if (!opts.warm_start || !previous) {
        return sawtooth_homotopy(start, end, teeth, amplitude, n_steps, opts.sawtooth_terms);
      }
      Path p = refine_path(*previous, *previous_grid, grid, n_steps);
      add_teeth(p, grid, teeth, amplitude, opts.sawtooth_terms);
      return p;
    }();
    const double initial_length = path_length(init, oracle);
    auto result = bvp_minimize(start.pos().flat(), end.pos().flat(), descent, std::move(init),
                               opts.bvp);

    VanishingLevel row;
    row.teeth = teeth;
    row.n_samples = n_samples;
    row.n_steps = n_steps;
    row.initial_length = initial_length;
    row.length = path_length(result.path, oracle);
    row.energy = path_energy(result.path, oracle);
    row.iterations = result.report.iterations;
    row.converged = result.report.converged;
    rows.push_back(row);
    previous = std::move(result.path);
    previous_grid = grid;
    teeth *= opts.teeth_factor;
  }
  return rows;
}

}  // namespace shapegeo
