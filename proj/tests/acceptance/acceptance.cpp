// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "shapegeo/curve_space.hpp"
#include "shapegeo/diffeo.hpp"
#include "shapegeo/hilbert.hpp"
#include "shapegeo/kernels.hpp"

using namespace shapegeo;
using Eigen::MatrixXd;
constexpr double kPi = std::numbers::pi;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vec random_unit(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> normal;
  Vec x(m);
  for (int j = 0; j < m; ++j) x[j] = normal(rng);
  return x / x.norm();
}

Verdict grossman() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<int> ns;
  for (int n = 1; n <= 20; ++n) ns.push_back(n);
  const auto rows = grossman_experiment(EllipsoidSpec(24), ns, 1e-9);
  const double elapsed = seconds_since(t0);
  bool ok = rows.size() == 20;
  double min_gap = 1e300;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ok = ok && rows[i].length > kPi && rows[i].length <= rows[i].bound;
    if (i) {
      ok = ok && rows[i].length < rows[i - 1].length;
      min_gap = std::min(min_gap, rows[i - 1].length - rows[i].length);
    }
  }
  ok = ok && elapsed < 5.0;
  return {ok, fmt("n=1..20 within (pi, (1+2^-n)pi], min decrease %.3g, %.3f s", min_gap, elapsed)};
}

Verdict sphere() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(42);
  const auto o = sphere_oracle(10);
  BvpOptions opts;
  opts.stall_window = 200;
  opts.throw_on_nonconvergence = false;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Vec x = random_unit(rng, 10), y = random_unit(rng, 10);
    const auto r = bvp_minimize(x, y, o, Path::linear(x, y, 64), opts);
    worst = std::max(worst, std::abs(r.report.length - sphere_distance_analytic(x, y)));
  }
  const double elapsed = seconds_since(t0);
  return {worst < 1e-3 && elapsed < 30.0,
          fmt("20 pairs, m=10, max |len - arccos| %.3g, %.2f s", worst, elapsed)};
}

Verdict vanishing() {
  const auto l2 = vanishing_distance_experiment(CurveMetric::L2);
  const auto flat = vanishing_distance_experiment(CurveMetric::Flat);
  bool ok = l2.size() >= 3 && flat.size() == l2.size();
  std::string lengths;
  for (std::size_t i = 0; i < l2.size(); ++i) {
    lengths += fmt("%s%.6f(k=%d)", i ? ", " : "", l2[i].length, l2[i].teeth);
    if (i) ok = ok && l2[i].length < l2[i - 1].length;
  }
  double spread = 0.0;
  for (const auto& f : flat) spread = std::max(spread, std::abs(f.length - flat.front().length));
  ok = ok && spread <= 1e-9;
  return {ok, "L2 lengths " + lengths + fmt("; flat spread %.3g", spread)};
}

Verdict metric_variation() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> size(0, 2);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const PeriodicGrid g(32 << size(rng));
    const auto base = Curve::circle(g).pos();
    const auto c = Curve(base + 0.15 * oracle::random_trig(g, 3, rng, 2));
    const auto l = oracle::random_trig(g, 4, rng, 2);
    const auto h = oracle::random_trig(g, 4, rng, 2);
    const auto k = oracle::random_trig(g, 4, rng, 2);
    const double analytic = l2_metric_variation(c, l, h, k);
    const double fd = oracle::fd_first(
        [&](double e) { return l2_metric(Curve(c.pos() + e * l), h, k); }, 0.0, 1e-3);
    worst = std::max(worst, std::abs(analytic - fd) / std::abs(analytic));
  }
  return {worst <= 1e-6, fmt("100 configs, max relative error %.3g", worst)};
}

Verdict energy_gradient_check() {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  int paths = 0;
  bool cs = true;
  auto check_cs = [&](const Path& p, const MetricOracle& o) {
    const double len = path_length(p, o), e = path_energy(p, o);
    cs = cs && len * len <= 2 * e * (1 + 1e-12);
    ++paths;
  };
  auto check = [&](const Path& p, const MetricOracle& o) {
    const auto grad = energy_gradient(p, o);
    std::vector<Vec> w;
    double directional = 0.0;
    for (int i = 1; i < p.n_steps(); ++i) {
      w.push_back(Vec::Random(p.dim()));
      directional += grad[i - 1].dot(w.back());
    }
    auto shifted = [&](double e) {
      Path q = p;
      for (int i = 1; i < p.n_steps(); ++i) q.points()[i] += e * w[i - 1];
      check_cs(q, o);
      return path_energy(q, o);
    };
    const double fd = oracle::fd_first(shifted, 0.0, 1e-3);
    worst = std::max(worst, std::abs(directional - fd) / std::abs(directional));
    check_cs(p, o);
  };

  const PeriodicGrid g(32);
  const auto curves = l2_curve_oracle(g, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const Curve a(Curve::circle(g).pos() + 0.1 * oracle::random_trig(g, 3, rng, 2));
    const Curve b(Curve::circle(g).pos() + 0.1 * oracle::random_trig(g, 3, rng, 2));
    Path p = Path::linear(a.pos().flat(), b.pos().flat(), 6);
    for (int i = 1; i < 6; ++i) p.points()[i] += 0.05 * oracle::random_trig(g, 2, rng, 2).flat();
    check(p, curves);
  }
  const auto sph = sphere_oracle(10);
  const auto marks = landmark_metric_oracle(Kernel::gaussian(1.0), 2, 4);
  for (int trial = 0; trial < 10; ++trial) {
    Path p = Path::linear(random_unit(rng, 10), random_unit(rng, 10), 8);
    for (int i = 1; i < 8; ++i) p.points()[i] += 0.1 * Vec::Random(10);
    check(p, sph);
    const Vec q0 = LandmarkConfig(oracle::random_landmarks(rng, 2, 4, 1.0, 0.3)).flat();
    Path pl = Path::linear(q0, q0 + 0.5 * Vec::Random(8), 8);
    for (int i = 1; i < 8; ++i) pl.points()[i] += 0.05 * Vec::Random(8);
    check(pl, marks);
  }
  return {worst <= 1e-6 && cs,
          fmt("30 paths, max relative error %.3g; Len^2 <= 2E on %d paths: %s", worst, paths,
              cs ? "yes" : "no")};
}

Verdict exponential_map() {
  const PeriodicGrid g(256);
  const auto u = CircleField::sample(g, [](double x) { return 1 + 0.5 * std::sin(x); });
  const auto conj = conjugate_to_rotation(u);
  const auto inv = invert(conj.eta);
  double conj_err = 0.0;
  for (double t : {0.25, 0.5, 1.0}) {
    conj_err = std::max(conj_err, sup_distance(compose(conj.eta, compose(flow_autonomous(u, t), inv)),
                                               CircleDiffeo::rotation(g, conj.c * t)));
  }
  const double c_err = std::abs(conj.c - std::sqrt(0.75));
  auto psi = [&](double a) {
    return CircleDiffeo::from_lift(g, [a](double x) { return x + a * std::sin(3 * x); });
  };
  const auto d1 = exp_noninjectivity_demo(psi(0.05), 3);
  const auto d2 = exp_noninjectivity_demo(psi(0.08), 3);
  const double dist = sup_norm(d1.u.values() - d2.u.values());
  const bool ok = conj_err < 1e-6 && c_err <= 1e-9 && dist > 0.01 && d1.error < 1e-6 && d2.error < 1e-6;
  return {ok, fmt("conjugation %.3g, |c - sqrt(0.75)| %.3g, field distance %.4f, exp errors %.3g %.3g",
                  conj_err, c_err, dist, d1.error, d2.error)};
}

Verdict blowup() {
  const auto u = TimeDependentField::analytic(FieldDomain::Line, [](double, double x) { return x * x; });
  Vec s(1);
  s << 2.0;
  const auto r = flow_time_dependent(u, s);
  return {r.blow_up && std::abs(r.blow_up_time - 0.5) <= 1e-3,
          fmt("blow-up %s at t = %.6f", r.blow_up ? "reported" : "missing", r.blow_up_time)};
}

Verdict kernel_metric() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> count(1, 10), dimd(1, 3);
  const std::vector<Kernel> kernels = {Kernel::gaussian(1.0), Kernel::sobolev(1), Kernel::sobolev(2)};
  int spd = 0, bound_ok = 0, bound_total = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& k = kernels[trial % 3];
    const int d = dimd(rng), n = count(rng);
    const LandmarkConfig q(oracle::random_landmarks(rng, d, n, 2.0, 0.05));
    if (gram_assemble(k, q).min_eigenvalue() > 0) ++spd;
    const auto b = admissibility_bound_check(k, q, MatrixXd::Random(d, n));
    ++bound_total;
    if (b.lhs <= b.rhs * (1 + 1e-12)) ++bound_ok;
  }
  double qp_err = 0.0;
  for (const auto& k : kernels) {
    for (int n = 1; n <= 5; ++n) {
      for (int rep = 0; rep < 4; ++rep) {
        const MatrixXd q = oracle::random_landmarks(rng, 2, n, 1.0, 0.3);
        const MatrixXd h = MatrixXd::Random(2, n);
        const double g = induced_metric(k, LandmarkConfig(q), h, h);
        const double qp = oracle::min_norm_interpolant(k, q, h, oracle::random_landmarks(rng, 2, 3, 2.0, 0.3));
        qp_err = std::max(qp_err, std::abs(g - qp) / std::max(1.0, g));
        const auto b = admissibility_bound_check(k, LandmarkConfig(q), h);
        ++bound_total;
        if (b.lhs <= b.rhs * (1 + 1e-12)) ++bound_ok;
      }
    }
  }
  double perm_err = 0.0;
  const auto o = landmark_metric_oracle(Kernel::gaussian(1.0), 2, 3);
  auto flat = [](const MatrixXd& m) { return Vec(Eigen::Map<const Vec>(m.data(), m.size())); };
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(3);
  perm.indices() << 1, 2, 0;
  for (int rep = 0; rep < 3; ++rep) {
    const MatrixXd q0 = oracle::random_landmarks(rng, 2, 3, 1.0, 0.3);
    const MatrixXd q1 = q0 + 0.5 * MatrixXd::Random(2, 3);
    const double a = distance_estimate(flat(q0), flat(q1), o, {});
    const double b = distance_estimate(flat(q0 * perm), flat(q1 * perm), o, {});
    perm_err = std::max(perm_err, std::abs(a - b));
  }
  const bool ok = spd == 1000 && qp_err <= 1e-8 && bound_ok == bound_total && perm_err <= 1e-8;
  return {ok, fmt("SPD %d/1000, QP gap %.3g, bound %d/%d, permutation gap %.3g", spd, qp_err,
                  bound_ok, bound_total, perm_err)};
}

Verdict flow_group() {
  std::mt19937_64 rng(9);
  double worst = 0.0;
  bool members = true;
  const RealWindow w;
  std::uniform_real_distribution<double> uni(-1, 1);
  for (int trial = 0; trial < 4; ++trial) {
    const double amp = 0.6 * uni(rng), centre = uni(rng), drift = 0.5 * uni(rng);
    const int K = 8;
    Vec knots(K);
    std::vector<Vec> samples;
    for (int k = 0; k < K; ++k) {
      knots[k] = double(k) / K;
      Vec u(w.n);
      for (int j = 0; j < w.n; ++j) {
        const double x = w.node(j) - centre - drift * k / K;
        u[j] = amp * std::exp(-0.5 * x * x);
      }
      samples.push_back(u);
    }
    for (auto rule : {TimeInterpolation::PiecewiseConstant, TimeInterpolation::PiecewiseLinear}) {
      const auto field = TimeDependentField::on_line(w, knots, samples, rule);
      const Vec x = w.nodes();
      const auto fwd = flow_time_dependent(field, x);
      if (!fwd.final_map) return {false, "forward flow blew up"};
      members = members && membership_check(w, (*fwd.final_map - x).eval());
      const auto back = flow_time_dependent(field.reversed(), *fwd.final_map);
      if (!back.final_map) return {false, "reverse flow blew up"};
      worst = std::max(worst, (*back.final_map - x).cwiseAbs().maxCoeff());
    }
  }
  const PeriodicGrid g(64);
  for (int trial = 0; trial < 4; ++trial) {
    Vec knots(4);
    std::vector<PeriodicFunction> fields;
    for (int k = 0; k < 4; ++k) {
      knots[k] = k / 4.0;
      fields.push_back(0.5 * oracle::random_trig(g, 3, rng));
    }
    const auto field = TimeDependentField::on_circle(knots, fields);
    const auto fwd = flow_time_dependent(field, g);
    const auto back = flow_time_dependent(field.reversed(), *fwd.final_map);
    worst = std::max(worst, (*back.final_map - g.nodes()).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-6 && members,
          fmt("round-trip sup error %.3g on 12 fields; membership %s", worst, members ? "passed" : "failed")};
}

Verdict sobolev() {
  const PeriodicGrid g(64);
  double exact_gap = 0.0, ratio_gap = 0.0;
  for (int k = 0; k <= 8; ++k) {
    for (auto mode : {0, 1}) {
      const auto f = PeriodicFunction::sample(g, [k, mode](double x) { return mode ? std::sin(k * x) : std::cos(k * x); });
      if (k == 0 && mode) continue;
      for (int q : {0, 1}) {
        const double a = sobolev_inner_product(f, f, q), b = sobolev_inner_product_integer(f, f, q);
        exact_gap = std::max(exact_gap, std::abs(a - b) / std::abs(a));
      }
      const double a = sobolev_inner_product(f, f, 2), b = sobolev_inner_product_integer(f, f, 2);
      ratio_gap = std::max(ratio_gap, std::abs(b / a - sobolev_weight_ratio(k, 2)));
    }
  }
  std::mt19937_64 rng(10);
  const double c1 = embedding_constant(g, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto f = oracle::random_trig(g, 12, rng);
    worst = std::max(worst, sup_norm(f) / (c1 * sobolev_norm(f, 1.0)));
  }
  const bool ok = exact_gap <= 1e-13 && ratio_gap <= 1e-13 && worst <= 1.0;
  return {ok, fmt("q in {0,1} gap %.3g, q=2 ratio gap %.3g, max sup/(C|f|) %.4f over 500", exact_gap,
                  ratio_gap, worst)};
}

}  // namespace

int main() {
  const std::vector<std::function<Verdict()>> criteria = {
      grossman, sphere, vanishing, metric_variation, energy_gradient_check,
      exponential_map, blowup, kernel_metric, flow_group, sobolev};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("criterion %zu: %s %s\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
