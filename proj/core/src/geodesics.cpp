#include "shapegeo/geodesics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <string>

namespace shapegeo {

namespace {

Vec basis(int dim, int i) {
  Vec e = Vec::Zero(dim);
  e[i] = 1.0;
  return e;
}

struct Segment {
  Vec mid;
  Vec vel;
};

Segment segment(const Path& p, int s) {
  const double inv_dt = p.n_steps();
  return {0.5 * (p[s] + p[s + 1]), (p[s + 1] - p[s]) * inv_dt};
}

// Solves tridiag(-1, 2, -1) / dt * Z = G for the interior nodes, column by
// column of the stacked (interior x dim) right-hand side.
std::vector<Vec> apply_inverse_time_laplacian(const std::vector<Vec>& g, double dt) {
  const std::size_t n = g.size();
  if (n == 0) return {};
  const double diag = 2.0 / dt;
  const double off = -1.0 / dt;
  std::vector<double> c(n);
  std::vector<Vec> d(g);
  c[0] = off / diag;
  d[0] /= diag;
  for (std::size_t i = 1; i < n; ++i) {
    const double denom = diag - off * c[i - 1];
    c[i] = off / denom;
    d[i] = (d[i] - off * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

double stacked_dot(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

double safe_energy(const Path& p, const MetricOracle& oracle) {
  try {
    const double e = path_energy(p, oracle);
    return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Oracle helpers

Vec lower(const MetricOracle& oracle, const Vec& x, const Vec& h) {
  if (oracle.lower) return oracle.lower(x, h);
  Vec out(oracle.dim);
  for (int j = 0; j < oracle.dim; ++j) out[j] = oracle.metric(x, h, basis(oracle.dim, j));
  return out;
}

Vec variation_gradient(const MetricOracle& oracle, const Vec& x, const Vec& h, const Vec& k,
                       bool allow_fd) {
  if (oracle.variation_gradient) return oracle.variation_gradient(x, h, k);
  Vec out(oracle.dim);
  if (oracle.variation) {
    for (int j = 0; j < oracle.dim; ++j) out[j] = oracle.variation(x, basis(oracle.dim, j), h, k);
    return out;
  }
  if (!allow_fd) {
    throw MissingVariation("metric oracle provides no variation and finite differences are off");
  }
  constexpr double eps = 1e-6;
  for (int j = 0; j < oracle.dim; ++j) {
    Vec xp = x, xm = x;
    xp[j] += eps;
    xm[j] -= eps;
    out[j] = (oracle.metric(xp, h, k) - oracle.metric(xm, h, k)) / (2.0 * eps);
  }
  return out;
}

Eigen::MatrixXd gram_matrix(const MetricOracle& oracle, const Vec& x) {
  Eigen::MatrixXd m(oracle.dim, oracle.dim);
  for (int i = 0; i < oracle.dim; ++i) m.col(i) = lower(oracle, x, basis(oracle.dim, i));
  return 0.5 * (m + m.transpose());
}

// ---------------------------------------------------------------------------
// Path

Path::Path(std::vector<Vec> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw InvalidArgument("Path: need at least two points");
  for (const auto& p : points_) {
    if (p.size() != points_.front().size()) throw InvalidArgument("Path: ragged point sizes");
  }
  if (!points_.front().allFinite() || !points_.back().allFinite()) {
    throw InvalidArgument("Path: non-finite endpoint");
  }
}

Path Path::linear(const Vec& x, const Vec& y, int n_steps) {
  if (n_steps < 1) throw InvalidArgument("Path::linear: n_steps must be >= 1");
  std::vector<Vec> pts;
  pts.reserve(n_steps + 1);
  for (int i = 0; i <= n_steps; ++i) {
    const double t = double(i) / n_steps;
    pts.push_back((1.0 - t) * x + t * y);
  }
  return Path(std::move(pts));
}

Path Path::constant(const Vec& x, int n_steps) { return linear(x, x, n_steps); }

// ---------------------------------------------------------------------------
// Energy, length, gradient

double path_energy(const Path& p, const MetricOracle& oracle) {
  double e = 0.0;
  for (int s = 0; s < p.n_steps(); ++s) {
    const auto seg = segment(p, s);
    e += oracle.metric(seg.mid, seg.vel, seg.vel);
  }
  return 0.5 * e * p.dt();
}

double path_length(const Path& p, const MetricOracle& oracle) {
  double len = 0.0;
  for (int s = 0; s < p.n_steps(); ++s) {
    const auto seg = segment(p, s);
    len += std::sqrt(std::max(0.0, oracle.metric(seg.mid, seg.vel, seg.vel)));
  }
  return len * p.dt();
}

std::vector<Vec> energy_gradient(const Path& p, const MetricOracle& oracle, bool allow_fd) {
  const int n = p.n_steps();
  const double dt = p.dt();
  std::vector<Vec> lowered(n), varied(n);
  for (int s = 0; s < n; ++s) {
    const auto seg = segment(p, s);
    lowered[s] = lower(oracle, seg.mid, seg.vel);
    varied[s] = variation_gradient(oracle, seg.mid, seg.vel, seg.vel, allow_fd);
  }
  std::vector<Vec> grad;
  grad.reserve(n > 1 ? n - 1 : 0);
  for (int i = 1; i < n; ++i) {
    grad.push_back(lowered[i - 1] - lowered[i] + 0.25 * dt * (varied[i - 1] + varied[i]));
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Boundary-value solver

BvpResult bvp_minimize(const Vec& start, const Vec& end, const MetricOracle& oracle, Path init,
                       const BvpOptions& opts) {
  if (start.size() != oracle.dim || end.size() != oracle.dim || init.dim() != oracle.dim) {
    throw InvalidArgument("bvp_minimize: dimension mismatch with oracle");
  }
  Path path = std::move(init);
  path.points().front() = start;
  path.points().back() = end;

  double energy = path_energy(path, oracle);
  if (!std::isfinite(energy)) throw InvalidArgument("bvp_minimize: initial path has infinite energy");
  auto grad = energy_gradient(path, oracle, opts.allow_fd);
  double gnorm = std::sqrt(stacked_dot(grad, grad));
  double alpha = 1.0;
  int iter = 0;
  std::vector<double> history{energy};

  while (gnorm > opts.tolerance && iter < opts.max_iterations) {
    std::vector<Vec> dir = grad;
    if (opts.precondition) {
      if (oracle.raise) {
        for (std::size_t i = 0; i < dir.size(); ++i) dir[i] = oracle.raise(path[i + 1], grad[i]);
      }
      dir = apply_inverse_time_laplacian(dir, path.dt());
    }
    for (auto& d : dir) d = -d;
    const double slope = stacked_dot(grad, dir);

    const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(energy);
    alpha = std::min(1e6, 2.0 * alpha);
    bool accepted = false;
    Path trial = path;
    double trial_energy = 0.0;
    while (alpha > 1e-20) {
      for (int i = 1; i < path.n_steps(); ++i) trial.points()[i] = path[i] + alpha * dir[i - 1];
      trial_energy = safe_energy(trial, oracle);
      if (trial_energy <= energy + opts.armijo_c1 * alpha * slope + slack) {
        accepted = true;
        break;
      }
      alpha *= opts.shrink;
    }
    if (!accepted) break;

    path = std::move(trial);
    energy = trial_energy;
    grad = energy_gradient(path, oracle, opts.allow_fd);
    gnorm = std::sqrt(stacked_dot(grad, grad));
    ++iter;
    if (opts.observer) opts.observer(iter, energy, gnorm);
    if (opts.stall_window > 0) {
      history.push_back(energy);
      const auto w = static_cast<std::size_t>(opts.stall_window);
      if (history.size() > w &&
          history[history.size() - 1 - w] - energy <= opts.stall_tolerance * std::abs(energy)) {
        break;
      }
    }
  }

  GeodesicReport report;
  report.energy = energy;
  report.length = path_length(path, oracle);
  report.gradient_norm = gnorm;
  report.iterations = iter;
  report.converged = gnorm <= opts.tolerance;
  if (!report.converged && opts.throw_on_nonconvergence) {
    throw NonConvergence("bvp_minimize: gradient norm " + std::to_string(gnorm) +
                             " above tolerance after " + std::to_string(iter) + " iterations",
                         path, report);
  }
  return {std::move(path), report};
}

// ---------------------------------------------------------------------------
// Initial-value solver

Vec christoffel_contraction(const MetricOracle& oracle, const Vec& x, const Vec& v,
                            double condition_limit) {
  if (!oracle.has_variation() && !oracle.variation_gradient) {
    throw MissingVariation("ivp_shoot requires the metric variation");
  }
  const Eigen::MatrixXd gram = gram_matrix(oracle, x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > condition_limit) {
    throw SingularGram("Gram matrix of the metric is numerically singular (condition " +
                       std::to_string(lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity()) +
                       ")");
  }

  Vec first(oracle.dim);
  if (oracle.variation_lower) {
    first = oracle.variation_lower(x, v, v);
  } else {
    for (int j = 0; j < oracle.dim; ++j) first[j] = oracle.variation(x, v, v, basis(oracle.dim, j));
  }
  const Vec second = variation_gradient(oracle, x, v, v);
  const Vec rhs = first - 0.5 * second;
  return gram.ldlt().solve(rhs);
}

Path ivp_shoot(const Vec& x0, const Vec& v0, const MetricOracle& oracle, int n_steps,
               const IvpOptions& opts) {
  if (n_steps < 1) throw InvalidArgument("ivp_shoot: n_steps must be >= 1");
  if (x0.size() != oracle.dim || v0.size() != oracle.dim) {
    throw InvalidArgument("ivp_shoot: dimension mismatch with oracle");
  }
  const double h = 1.0 / n_steps;
  auto accel = [&](const Vec& x, const Vec& v) -> Vec {
    return -christoffel_contraction(oracle, x, v, opts.condition_limit);
  };

  std::vector<Vec> pts{x0};
  Vec x = x0, v = v0;
  Vec a = accel(x, v);
  for (int s = 0; s < n_steps; ++s) {
    const Vec x_next = x + h * v + 0.5 * h * h * a;
    Vec v_next = v + h * a;
    Vec a_next = accel(x_next, v_next);
    for (int it = 0; it < opts.corrector_iterations; ++it) {
      const Vec v_new = v + 0.5 * h * (a + a_next);
      const double change = (v_new - v_next).norm();
      v_next = v_new;
      a_next = accel(x_next, v_next);
      if (change <= 1e-15 * (1.0 + v_next.norm())) break;
    }
    x = x_next;
    v = v_next;
    a = a_next;
    pts.push_back(x);
  }
  return Path(std::move(pts));
}

// ---------------------------------------------------------------------------

double distance_estimate(const Vec& x, const Vec& y, const MetricOracle& oracle,
                         const DistanceStrategy& strategy) {
  Path init = strategy.initializer ? strategy.initializer(x, y, strategy.n_steps)
                                   : Path::linear(x, y, strategy.n_steps);
  const auto result = bvp_minimize(x, y, oracle, std::move(init), strategy.bvp);
  return path_length(result.path, oracle);
}

MetricOracle euclidean_oracle(int dim, double weight) {
  MetricOracle o;
  o.dim = dim;
  o.metric = [weight](const Vec&, const Vec& h, const Vec& k) { return weight * h.dot(k); };
  o.variation = [](const Vec&, const Vec&, const Vec&, const Vec&) { return 0.0; };
  o.lower = [weight](const Vec&, const Vec& h) -> Vec { return weight * h; };
  o.variation_gradient = [dim](const Vec&, const Vec&, const Vec&) -> Vec {
    return Vec::Zero(dim);
  };
  o.variation_lower = [dim](const Vec&, const Vec&, const Vec&) -> Vec { return Vec::Zero(dim); };
  return o;
}

}  // namespace shapegeo
