#include "shapegeo/cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "shapegeo/curve_space.hpp"
#include "shapegeo/diffeo.hpp"
#include "shapegeo/hilbert.hpp"
#include "shapegeo/kernels.hpp"
#include "shapegeo/periodic.hpp"

namespace shapegeo::cli {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

bool power_of_two(int n) { return n >= 4 && (n & (n - 1)) == 0; }

// ---------------------------------------------------------------------------

ExperimentOutput run_grossman(const Config& c) {
  const int m = c.get_int("m");
  const auto ns = c.get_int_list("n_list");
  const double tol = c.get_double("tol");
  require(m >= 2 && m <= 64, "m must lie in [2, 64]");
  require(tol > 0.0 && tol < 1e-2, "tol must lie in (0, 1e-2)");
  for (int n : ns) require(n >= 1 && n < m, "n_list entries must lie in [1, m - 1]");

  ExperimentOutput out;
  out.table = ResultTable({"n", "length", "bound", "excess"},
                          "half great circle lengths on the ellipsoid with axes 1 + 2^-n");
  const auto rows = grossman_experiment(EllipsoidSpec(m), ns, tol);
  bool within = true, decreasing = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out.table.add_row({double(r.n), r.length, r.bound, r.length - kPi});
    within = within && r.length > kPi && r.length <= r.bound;
    if (i && rows[i - 1].n < r.n) decreasing = decreasing && r.length < rows[i - 1].length;
  }
  out.summary = {{"within_bound", within}, {"strictly_decreasing", decreasing}};

  auto& p = out.plot;
  p.x = "n";
  p.x_label = "n";
  p.markers = true;
  if (c.get_bool("log_scale")) {
    p.title = "Len - pi on a log scale";
    p.y = {"excess"};
    p.y_label = "Len - pi";
    p.log_y = true;
  } else {
    p.title = "Length of the image of the half great circle";
    p.y = {"length", "bound"};
    p.y_label = "length";
    p.hlines = {{kPi, "pi"}};
  }
  return out;
}

// ---------------------------------------------------------------------------

ExperimentOutput run_vanishing(const Config& c) {
  VanishingOptions o;
  o.levels = c.get_int("levels");
  o.teeth_factor = c.get_int("teeth_factor");
  o.shift = c.get_double("shift");
  o.amplitude = c.get_double("amplitude");
  o.sawtooth_terms = c.get_int("sawtooth_terms");
  o.min_samples = c.get_int("min_samples");
  o.min_steps = c.get_int("min_steps");
  o.warm_start = c.get_bool("warm_start");
  o.speed_floor = c.get_double("speed_floor");
  o.bvp.tolerance = c.get_double("tolerance");
  o.bvp.max_iterations = c.get_int("max_iterations");
  o.bvp.stall_window = c.get_int("stall_window");
  require(o.levels >= 3 && o.levels <= 6, "levels must lie in [3, 6]");
  require(o.teeth_factor >= 2 && o.teeth_factor <= 8, "teeth_factor must lie in [2, 8]");
  require(o.shift > 0.0 && o.shift <= 2.0, "shift must lie in (0, 2]");
  require(o.amplitude > 0.0 && o.amplitude <= 0.5, "amplitude must lie in (0, 0.5]");
  require(o.sawtooth_terms >= 1 && o.sawtooth_terms <= 8, "sawtooth_terms must lie in [1, 8]");
  require(power_of_two(o.min_samples) && o.min_samples <= 1024,
          "min_samples must be a power of two in [4, 1024]");
  require(o.min_steps >= 2 && o.min_steps <= 256, "min_steps must lie in [2, 256]");
  require(o.speed_floor >= 0.0 && o.speed_floor <= 1.0, "speed_floor must lie in [0, 1]");
  require(o.bvp.tolerance > 0.0, "tolerance must be positive");
  require(o.bvp.max_iterations >= 1 && o.bvp.max_iterations <= 100000,
          "max_iterations must lie in [1, 100000]");
  require(o.bvp.stall_window >= 0, "stall_window must be >= 0");

  const auto l2 = vanishing_distance_experiment(CurveMetric::L2, o);
  const auto flat = vanishing_distance_experiment(CurveMetric::Flat, o);

  ExperimentOutput out;
  out.table = ResultTable({"level", "teeth", "n_samples", "n_steps", "l2_length",
                           "l2_initial_length", "l2_energy", "l2_iterations", "l2_converged",
                           "flat_length"},
                          "minimised path lengths from the unit circle to its translate");
  bool decreasing = true;
  double flat_spread = 0.0;
  for (std::size_t i = 0; i < l2.size(); ++i) {
    const auto& a = l2[i];
    out.table.add_row({double(i), double(a.teeth), double(a.n_samples), double(a.n_steps),
                       a.length, a.initial_length, a.energy, double(a.iterations),
                       a.converged ? 1.0 : 0.0, flat[i].length});
    if (i) {
      decreasing = decreasing && a.length < l2[i - 1].length;
      flat_spread = std::max(flat_spread, std::abs(flat[i].length - flat[0].length));
    }
  }
  out.summary = {{"l2_strictly_decreasing", decreasing},
                 {"flat_max_change", flat_spread},
                 {"l2_final_length", l2.back().length}};
  auto& p = out.plot;
  p.title = "Path length against the number of teeth";
  p.x = "level";
  p.x_label = "refinement level (teeth = teeth_factor^level)";
  p.y = {"l2_length", "flat_length"};
  p.y_label = "length";
  p.markers = true;
  return out;
}

// ---------------------------------------------------------------------------

Vec random_unit(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> normal;
  Vec x(m);
  for (int j = 0; j < m; ++j) x[j] = normal(rng);
  return x / x.norm();
}

ExperimentOutput run_sphere(const Config& c) {
  const int m = c.get_int("m");
  const int pairs = c.get_int("pairs");
  const int steps = c.get_int("n_steps");
  BvpOptions o;
  o.tolerance = c.get_double("tolerance");
  o.max_iterations = c.get_int("max_iterations");
  o.stall_window = c.get_int("stall_window");
  o.throw_on_nonconvergence = false;
  require(m >= 2 && m <= 200, "m must lie in [2, 200]");
  require(pairs >= 1 && pairs <= 1000, "pairs must lie in [1, 1000]");
  require(steps >= 2 && steps <= 1024, "n_steps must lie in [2, 1024]");
  require(o.tolerance > 0.0, "tolerance must be positive");
  require(o.max_iterations >= 1, "max_iterations must be >= 1");
  require(o.stall_window >= 0, "stall_window must be >= 0");

  std::mt19937_64 rng(c.get_uint64("seed"));
  const auto oracle = sphere_oracle(m);
  ExperimentOutput out;
  out.table = ResultTable({"pair", "analytic", "length", "abs_error", "energy", "iterations",
                           "converged"},
                          "energy minimising paths between random points of the unit sphere");
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const Vec x = random_unit(rng, m);
    const Vec y = random_unit(rng, m);
    const double exact = sphere_distance_analytic(x, y);
    const auto r = bvp_minimize(x, y, oracle, Path::linear(x, y, steps), o);
    const double err = std::abs(r.report.length - exact);
    worst = std::max(worst, err);
    out.table.add_row({double(i), exact, r.report.length, err, r.report.energy,
                       double(r.report.iterations), r.report.converged ? 1.0 : 0.0});
  }
  out.summary = {{"max_abs_error", worst}};
  auto& p = out.plot;
  p.title = "BVP length error against arccos<x, y>";
  p.x = "pair";
  p.y = {"abs_error"};
  p.y_label = "|length - arccos<x,y>|";
  p.log_y = true;
  p.markers = true;
  return out;
}

// ---------------------------------------------------------------------------

ExperimentOutput run_exp_circle(const Config& c) {
  const int n_samples = c.get_int("n_samples");
  const double a = c.get_double("field_amplitude");
  const auto times = c.get_double_list("times");
  const int n = c.get_int("n");
  const auto amps = c.get_double_list("psi_amplitudes");
  require(power_of_two(n_samples) && n_samples <= 4096,
          "n_samples must be a power of two in [4, 4096]");
  require(std::abs(a) < 1.0, "field_amplitude must lie in (-1, 1)");
  for (double t : times) require(t > 0.0 && t <= 4.0, "times must lie in (0, 4]");
  require(n >= 2 && 4 * n <= n_samples, "n must lie in [2, n_samples / 4]");
  for (double b : amps) require(std::abs(b) * n < 1.0, "psi_amplitudes must satisfy |a| n < 1");

  const PeriodicGrid grid(n_samples);
  ExperimentOutput out;
  out.table = ResultTable({"kind", "parameter", "value", "error"},
                          "kind 0: conjugation at time t; kind 1: exp of a field with period 2pi/n");

  const auto u = CircleField::sample(grid, [a](double x) { return 1.0 + a * std::sin(x); });
  const auto conj = conjugate_to_rotation(u);
  const auto eta_inv = invert(conj.eta);
  double worst_conj = 0.0;
  for (double t : times) {
    const auto phi = flow_autonomous(u, t);
    const auto lhs = compose(conj.eta, compose(phi, eta_inv));
    const double err = sup_distance(lhs, CircleDiffeo::rotation(grid, conj.c * t));
    worst_conj = std::max(worst_conj, err);
    out.table.add_row({0.0, t, conj.c, err});
  }

  double worst_exp = 0.0, spread = 0.0;
  std::vector<PeriodicFunction> fields;
  for (double b : amps) {
    const auto psi = CircleDiffeo::from_lift(grid, [b, n](double x) { return x + b * std::sin(n * x); });
    const auto demo = exp_noninjectivity_demo(psi, n);
    const double dist = fields.empty() ? 0.0 : sup_norm(demo.u.values() - fields.front());
    spread = std::max(spread, dist);
    worst_exp = std::max(worst_exp, demo.error);
    fields.push_back(demo.u.values());
    out.table.add_row({1.0, b, dist, demo.error});
  }
  out.summary = {{"c", conj.c},
                 {"c_closed_form", std::sqrt(1.0 - a * a)},
                 {"max_conjugation_error", worst_conj},
                 {"max_exp_error", worst_exp},
                 {"max_field_distance", spread}};
  auto& p = out.plot;
  p.title = "Sup errors of the exponential-map constructions";
  p.x = "parameter";
  p.x_label = "t (kind 0) or psi amplitude (kind 1)";
  p.y = {"error"};
  p.group = "kind";
  p.y_label = "sup error";
  p.log_y = true;
  p.markers = true;
  return out;
}

// ---------------------------------------------------------------------------

ExperimentOutput run_blowup(const Config& c) {
  const auto starts = c.get_double_list("x0_list");
  FlowOptions o;
  o.escape_radius = c.get_double("escape_radius");
  o.ode.max_substeps = c.get_int("max_substeps");
  o.ode.tolerance = c.get_double("ode_tolerance");
  require(o.escape_radius >= 10.0, "escape_radius must be >= 10");
  require(o.ode.max_substeps >= 16, "max_substeps must be >= 16");
  require(o.ode.tolerance > 0.0 && o.ode.tolerance < 1e-2, "ode_tolerance must lie in (0, 1e-2)");
  for (double x : starts) {
    require(std::abs(x) < o.escape_radius, "x0_list entries must lie inside the escape radius");
  }

  const auto u = TimeDependentField::analytic(FieldDomain::Line,
                                              [](double, double x) { return x * x; });
  ExperimentOutput out;
  out.table = ResultTable({"x0", "blow_up", "blow_up_time", "exact_time", "substeps"},
                          "flow of x' = x^2; blow_up_time is -1 when none occurs in [0, 1]");
  for (double x0 : starts) {
    Vec s(1);
    s << x0;
    const auto r = flow_time_dependent(u, s, o);
    const double exact = x0 > 0.0 ? 1.0 / x0 : -1.0;
    out.table.add_row({x0, r.blow_up ? 1.0 : 0.0, r.blow_up ? r.blow_up_time : -1.0, exact,
                       double(r.substeps)});
    if (r.blow_up) out.summary.emplace_back("blow_up_time_x0_" + format_number(x0), r.blow_up_time);
  }
  auto& p = out.plot;
  p.title = "Escape time of x' = x^2";
  p.x = "x0";
  p.y = {"blow_up_time", "exact_time"};
  p.y_label = "time";
  p.markers = true;
  return out;
}

// ---------------------------------------------------------------------------

Kernel kernel_from(const Config& c) {
  const std::string kind = c.get_string("kernel");
  if (kind == "gaussian") {
    const double sigma = c.get_double("sigma");
    require(sigma > 0.0 && sigma <= 100.0, "sigma must lie in (0, 100]");
    return Kernel::gaussian(sigma);
  }
  if (kind == "sobolev") {
    const int order = c.get_int("order");
    const double scale = c.get_double("sigma");
    require(order == 1 || order == 2, "order must be 1 or 2");
    require(scale > 0.0 && scale <= 100.0, "sigma must lie in (0, 100]");
    return Kernel::sobolev(order, scale);
  }
  throw ConfigError("kernel must be 'gaussian' or 'sobolev'");
}

Eigen::MatrixXd random_landmarks(std::mt19937_64& rng, int dim, int n, double spread,
                                 double min_sep) {
  std::uniform_real_distribution<double> uni(-spread, spread);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Eigen::MatrixXd q(dim, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < dim; ++i) q(i, j) = uni(rng);
    double sep = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) sep = std::min(sep, (q.col(i) - q.col(j)).norm());
    if (sep >= min_sep) return q;
  }
  throw ConfigError("could not draw well separated landmarks; increase spread");
}

Vec flatten(const Eigen::MatrixXd& q) { return Eigen::Map<const Vec>(q.data(), q.size()); }

ExperimentOutput run_landmark(const Config& c) {
  const Kernel k = kernel_from(c);
  const int dim = c.get_int("dim");
  const int n = c.get_int("n_landmarks");
  const int steps = c.get_int("n_steps");
  const double spread = c.get_double("spread");
  const double disp = c.get_double("displacement");
  BvpOptions o;
  o.tolerance = c.get_double("tolerance");
  o.max_iterations = c.get_int("max_iterations");
  o.stall_window = c.get_int("stall_window");
  o.throw_on_nonconvergence = false;
  require(dim >= 1 && dim <= 3, "dim must lie in [1, 3]");
  require(n >= 1 && n <= 20, "n_landmarks must lie in [1, 20]");
  require(steps >= 2 && steps <= 256, "n_steps must lie in [2, 256]");
  require(spread > 0.0 && spread <= 10.0, "spread must lie in (0, 10]");
  require(disp >= 0.0 && disp <= 10.0, "displacement must lie in [0, 10]");
  require(o.tolerance > 0.0, "tolerance must be positive");
  require(o.max_iterations >= 1, "max_iterations must be >= 1");

  std::mt19937_64 rng(c.get_uint64("seed"));
  const double min_sep = 0.2 * spread / std::max(1, n);
  const Eigen::MatrixXd q0 = random_landmarks(rng, dim, n, spread, min_sep);
  Eigen::MatrixXd q1 = q0;
  std::uniform_real_distribution<double> uni(-disp, disp);
  for (int attempt = 0;; ++attempt) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < dim; ++i) q1(i, j) = q0(i, j) + uni(rng);
    if (LandmarkConfig(q1).min_separation() >= min_sep) break;
    if (attempt > 1000) throw ConfigError("could not draw a separated target; lower displacement");
  }

  const auto oracle = landmark_metric_oracle(k, dim, n);
  const Vec x = flatten(q0), y = flatten(q1);
  const auto r = bvp_minimize(x, y, oracle, Path::linear(x, y, steps), o);

  // same problem with the landmarks listed in reverse order
  const Eigen::MatrixXd p0 = q0.rowwise().reverse(), p1 = q1.rowwise().reverse();
  const Vec px = flatten(p0), py = flatten(p1);
  const auto rp = bvp_minimize(px, py, oracle, Path::linear(px, py, steps), o);

  ExperimentOutput out;
  std::vector<std::string> cols = {"t", "landmark"};
  for (int i = 0; i < dim; ++i) cols.push_back("x" + std::to_string(i + 1));
  out.table = ResultTable(cols, "landmark trajectories of the energy minimising path");
  const auto& pts = r.path.points();
  for (std::size_t s = 0; s < pts.size(); ++s) {
    const double t = double(s) / r.path.n_steps();
    for (int j = 0; j < n; ++j) {
      std::vector<double> row = {t, double(j)};
      for (int i = 0; i < dim; ++i) row.push_back(pts[s][j * dim + i]);
      out.table.add_row(std::move(row));
    }
  }
  out.summary = {{"length", r.report.length},
                 {"energy", r.report.energy},
                 {"iterations", double(r.report.iterations)},
                 {"converged", r.report.converged},
                 {"permuted_length", rp.report.length},
                 {"permutation_difference", std::abs(rp.report.length - r.report.length)}};
  auto& p = out.plot;
  p.title = "Landmark trajectories";
  if (dim >= 2) {
    p.x = "x1";
    p.y = {"x2"};
    p.x_label = "x1";
    p.y_label = "x2";
  } else {
    p.x = "t";
    p.y = {"x1"};
    p.y_label = "x1";
  }
  p.group = "landmark";
  p.markers = true;
  return out;
}

// ---------------------------------------------------------------------------

// y with y + t s(y) = x, for s with |t s'| < 1.
double invert_shift(const std::function<double(double)>& s, const std::function<double(double)>& ds,
                    double t, double x) {
  double y = x;
  for (int it = 0; it < 60; ++it) {
    const double f = y + t * s(y) - x;
    const double step = f / (1.0 + t * ds(y));
    y -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(y))) break;
  }
  return y;
}

ExperimentOutput run_lddmm(const Config& c) {
  const double lo = c.get_double("window_lo"), hi = c.get_double("window_hi");
  const int nodes = c.get_int("window_nodes");
  const double amp = c.get_double("amplitude"), width = c.get_double("width");
  const int knots = c.get_int("time_knots");
  const std::string rule_name = c.get_string("interpolation");
  require(hi > lo, "window_hi must exceed window_lo");
  require(nodes >= 16 && nodes <= 65536, "window_nodes must lie in [16, 65536]");
  require(width > 0.0, "width must be positive");
  require(std::abs(amp) * std::exp(-0.5) / width < 0.9,
          "|amplitude| e^{-1/2} / width must stay below 0.9 so id + t s is invertible");
  require(knots >= 1 && knots <= 1024, "time_knots must lie in [1, 1024]");
  require(rule_name == "linear" || rule_name == "constant",
          "interpolation must be 'linear' or 'constant'");
  const auto rule = rule_name == "linear" ? TimeInterpolation::PiecewiseLinear
                                          : TimeInterpolation::PiecewiseConstant;

  // psi_t = id + t s; its generating field is u_t = s o psi_t^{-1}.
  const auto s = [amp, width](double x) { return amp * std::exp(-0.5 * x * x / (width * width)); };
  const auto ds = [s, width](double x) { return -x / (width * width) * s(x); };
  const RealWindow window(lo, hi, nodes);
  const Vec xs = window.nodes();
  Vec times(knots + 1);
  std::vector<Vec> samples;
  for (int k = 0; k <= knots; ++k) {
    const double t = double(k) / knots;
    times[k] = t;
    Vec u(nodes);
    for (int j = 0; j < nodes; ++j) u[j] = s(invert_shift(s, ds, t, xs[j]));
    samples.push_back(std::move(u));
  }
  const auto field = TimeDependentField::on_line(window, times, samples, rule);

  const auto fwd = flow_time_dependent(field, xs);
  if (fwd.blow_up) throw Error(ErrorKind::StepCollapse, "forward flow left the window");
  const Vec phi = *fwd.final_map;
  const auto back = flow_time_dependent(field.reversed(), phi);
  if (back.blow_up) throw Error(ErrorKind::StepCollapse, "reverse flow left the window");
  const Vec& round = *back.final_map;

  ExperimentOutput out;
  out.table = ResultTable({"x", "displacement", "exact_displacement", "roundtrip_error"},
                          "time-1 flow of the field generating id + t s, and its reverse");
  double flow_err = 0.0, round_err = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double exact = s(xs[j]);
    flow_err = std::max(flow_err, std::abs(phi[j] - xs[j] - exact));
    round_err = std::max(round_err, std::abs(round[j] - xs[j]));
    out.table.add_row({xs[j], phi[j] - xs[j], exact, std::abs(round[j] - xs[j])});
  }
  const bool member = membership_check(window, (phi - xs).eval());
  out.summary = {{"flow_error", flow_err},
                 {"roundtrip_error", round_err},
                 {"membership", member},
                 {"substeps", double(fwd.substeps + back.substeps)}};
  auto& p = out.plot;
  p.title = "Displacement of the time-1 flow";
  p.x = "x";
  p.y = {"displacement", "exact_displacement"};
  p.y_label = "phi(x) - x";
  return out;
}

// ---------------------------------------------------------------------------

PeriodicFunction random_band_limited(const PeriodicGrid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const int kmax = g.size() / 4;
  std::vector<double> a(kmax + 1), b(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    const double decay = 1.0 / (1.0 + k);
    a[k] = normal(rng) * decay;
    b[k] = normal(rng) * decay;
  }
  return PeriodicFunction::sample(g, [&](double x) {
    double v = a[0];
    for (int k = 1; k <= kmax; ++k) v += a[k] * std::cos(k * x) + b[k] * std::sin(k * x);
    return v;
  });
}

ExperimentOutput run_sobolev(const Config& c) {
  const int n_samples = c.get_int("n_samples");
  const int max_mode = c.get_int("max_mode");
  const int trials = c.get_int("trials");
  const double q_embed = c.get_double("embedding_q");
  require(power_of_two(n_samples) && n_samples <= 4096,
          "n_samples must be a power of two in [4, 4096]");
  require(max_mode >= 0 && 4 * max_mode <= n_samples, "max_mode must lie in [0, n_samples / 4]");
  require(trials >= 1 && trials <= 100000, "trials must lie in [1, 100000]");
  require(q_embed > 0.5 && q_embed <= 4.0, "embedding_q must lie in (0.5, 4]");

  const PeriodicGrid g(n_samples);
  ExperimentOutput out;
  out.table = ResultTable({"q", "k", "fourier_form", "integer_form", "ratio", "expected_ratio"},
                          "Fourier-weight and derivative forms of the H^q norm on cos(k x)");
  double worst_mismatch = 0.0;
  for (int q = 0; q <= 2; ++q) {
    for (int k = 0; k <= max_mode; ++k) {
      const auto f = PeriodicFunction::sample(g, [k](double x) { return std::cos(k * x); });
      const double fourier = sobolev_inner_product(f, f, q);
      const double integer = sobolev_inner_product_integer(f, f, q);
      const double ratio = integer / fourier;
      const double expected = sobolev_weight_ratio(k, q);
      worst_mismatch = std::max(worst_mismatch, std::abs(ratio - expected));
      out.table.add_row({double(q), double(k), fourier, integer, ratio, expected});
    }
  }

  std::mt19937_64 rng(c.get_uint64("seed"));
  const double cq = embedding_constant(g, q_embed);
  double embed = 0.0, algebra = 0.0;
  for (int i = 0; i < trials; ++i) {
    const auto f = random_band_limited(g, rng);
    embed = std::max(embed, sup_norm(f) / (cq * sobolev_norm(f, q_embed)));
  }
  // products double the band, so pair functions of half the band on a grid
  // of the same size by resampling from a coarser one
  const PeriodicGrid half(std::max(4, n_samples / 2));
  for (int i = 0; i < trials; ++i) {
    const auto f = resample(random_band_limited(half, rng), g);
    const auto h = resample(random_band_limited(half, rng), g);
    const double r = sobolev_norm(pointwise_multiply(f, h), 1.0) /
                     (sobolev_norm(f, 1.0) * sobolev_norm(h, 1.0));
    algebra = std::max(algebra, r);
  }
  out.summary = {{"max_ratio_mismatch", worst_mismatch},
                 {"embedding_constant", cq},
                 {"embedding_max_ratio", embed},
                 {"algebra_constant_h1", algebra}};
  auto& p = out.plot;
  p.title = "Ratio of the derivative form to the Fourier form";
  p.x = "k";
  p.y = {"ratio"};
  p.group = "q";
  p.y_label = "integer form / Fourier form";
  p.markers = true;
  return out;
}

}  // namespace

const std::vector<Experiment>& experiments() {
  static const std::vector<Experiment> all = {
      {"grossman", "half great circle lengths on the truncated ellipsoid",
       {{"m", "24"}, {"n_list", "1..20"}, {"tol", "1e-9"}, {"log_scale", "false"}},
       false, run_grossman},
      {"vanishing-l2", "shrinking L2 path lengths between two circles",
       {{"levels", "3"}, {"teeth_factor", "4"}, {"shift", "0.5"}, {"amplitude", "0.25"},
        {"sawtooth_terms", "2"}, {"min_samples", "32"}, {"min_steps", "8"},
        {"warm_start", "false"}, {"speed_floor", "0.2"}, {"tolerance", "1e-7"},
        {"max_iterations", "4000"}, {"stall_window", "50"}},
       false, run_vanishing},
      {"sphere-bvp", "BVP geodesics on the truncated unit sphere",
       {{"m", "10"}, {"pairs", "20"}, {"seed", "42"}, {"n_steps", "64"}, {"tolerance", "1e-8"},
        {"max_iterations", "20000"}, {"stall_window", "200"}},
       true, run_sphere},
      {"exp-circle", "conjugation to a rotation and non-injectivity of exp on Diff(S^1)",
       {{"n_samples", "256"}, {"field_amplitude", "0.5"}, {"times", "0.25,0.5,1"}, {"n", "3"},
        {"psi_amplitudes", "0.05,0.08"}},
       false, run_exp_circle},
      {"blowup", "finite-time escape of x' = x^2",
       {{"x0_list", "0.5,1,2,4"}, {"escape_radius", "1e6"}, {"max_substeps", "1048576"},
        {"ode_tolerance", "1e-8"}},
       false, run_blowup},
      {"landmark-geodesic", "geodesic between random landmark configurations",
       {{"kernel", "gaussian"}, {"sigma", "1"}, {"order", "1"}, {"dim", "2"},
        {"n_landmarks", "3"}, {"n_steps", "16"}, {"spread", "1"}, {"displacement", "0.5"},
        {"seed", "7"}, {"tolerance", "1e-8"}, {"max_iterations", "20000"},
        {"stall_window", "0"}},
       true, run_landmark},
      {"lddmm-flow", "flow of a time-dependent field on the line and its reverse",
       {{"window_lo", "-10"}, {"window_hi", "10"}, {"window_nodes", "2048"},
        {"amplitude", "0.2"}, {"width", "1"}, {"time_knots", "64"},
        {"interpolation", "linear"}},
       false, run_lddmm},
      {"sobolev-props", "Sobolev norm forms, embedding and algebra constants",
       {{"n_samples", "64"}, {"max_mode", "8"}, {"trials", "500"}, {"embedding_q", "1"},
        {"seed", "1"}},
       true, run_sobolev},
  };
  return all;
}

const Experiment* find_experiment(const std::string& name) {
  for (const auto& e : experiments()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

Config resolve_config(const Experiment& e, const Config& file, const std::vector<std::string>& sets,
                      const std::string& env_seed) {
  Config c;
  for (const auto& [k, v] : e.defaults) c.set(k, v);
  Config given = file;
  for (const auto& s : sets) given.apply_assignment(s);
  if (given.has("experiment")) {
    if (given.raw("experiment") != e.name) {
      throw ConfigError("config is for experiment '" + given.raw("experiment") + "', not '" +
                        e.name + "'");
    }
  }
  for (const auto& [k, v] : given.entries()) {
    if (k == "experiment") continue;
    if (!c.has(k)) throw ConfigError("unknown key '" + k + "' for experiment '" + e.name + "'");
    c.set(k, v);
  }
  if (e.randomized && !env_seed.empty()) c.set("seed", env_seed);
  if (e.randomized) c.get_uint64("seed");
  return c;
}

}  // namespace shapegeo::cli
