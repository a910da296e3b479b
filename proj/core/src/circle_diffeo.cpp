#include "shapegeo/circle_diffeo.hpp"

#include <cmath>
#include <numbers>

#include "shapegeo/errors.hpp"

namespace shapegeo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

PeriodicFunction normalized(PeriodicFunction f) {
  if (f.dim() != 1) throw InvalidArgument("CircleDiffeo: displacement must be scalar");
  const double mean = f.values().mean();
  const double shift = kTwoPi * std::floor((mean + kPi) / kTwoPi);
  if (shift != 0.0) {
    f = PeriodicFunction(f.grid(), f.values().array() - shift);
  }
  return f;
}

}  // namespace

double wrap_angle(double a) noexcept { return a - kTwoPi * std::floor((a + kPi) / kTwoPi); }

CircleDiffeo::CircleDiffeo(PeriodicFunction displacement)
    : f_(normalized(std::move(displacement))),
      interp_(f_),
      slope_interp_(derivative(f_)),
      min_slope_(0.0) {
  const auto df = derivative(f_);
  min_slope_ = 1.0 + df.values().minCoeff();
  if (!(min_slope_ > 0.0)) {
    throw InvalidArgument("CircleDiffeo: not orientation preserving (min 1 + f' = " +
                          std::to_string(min_slope_) + ")");
  }
}

CircleDiffeo CircleDiffeo::identity(PeriodicGrid grid) {
  return CircleDiffeo(PeriodicFunction::zero(grid, 1));
}

CircleDiffeo CircleDiffeo::rotation(PeriodicGrid grid, double angle) {
  return CircleDiffeo(PeriodicFunction(grid, Eigen::MatrixXd::Constant(1, grid.size(), angle)));
}

CircleDiffeo CircleDiffeo::from_lift(PeriodicGrid grid,
                                     const std::function<double(double)>& lift) {
  return CircleDiffeo(PeriodicFunction::sample(grid, [&](double x) { return lift(x) - x; }));
}

Vec CircleDiffeo::node_values() const {
  return f_.grid().nodes() + f_.values().row(0).transpose();
}

CircleDiffeo compose(const CircleDiffeo& phi, const CircleDiffeo& psi) {
  const auto& grid = psi.grid();
  Eigen::MatrixXd disp(1, grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const double inner = psi(grid.node(j));
    disp(0, j) = phi(inner) - grid.node(j);
  }
  return CircleDiffeo(PeriodicFunction(grid, std::move(disp)));
}

CircleDiffeo invert(const CircleDiffeo& phi) {
  const auto& grid = phi.grid();
  const auto& f = phi.displacement().values();
  const double fmax = f.maxCoeff();
  const double fmin = f.minCoeff();
  Eigen::MatrixXd disp(1, grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const double target = grid.node(j);
    double lo = target - fmax - 0.5;
    double hi = target - fmin + 0.5;
    while (phi(lo) > target) lo -= 1.0;
    while (phi(hi) < target) hi += 1.0;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      (phi(mid) < target ? lo : hi) = mid;
    }
    double y = 0.5 * (lo + hi);
    y -= (phi(y) - target) / phi.slope(y);
    disp(0, j) = y - target;
  }
  return CircleDiffeo(PeriodicFunction(grid, std::move(disp)));
}

double sup_distance(const CircleDiffeo& phi, const CircleDiffeo& psi) {
  if (!(phi.grid() == psi.grid())) throw InvalidArgument("sup_distance: grid mismatch");
  const auto& a = phi.displacement().values();
  const auto& b = psi.displacement().values();
  double worst = 0.0;
  for (int j = 0; j < a.cols(); ++j) {
    worst = std::max(worst, std::abs(wrap_angle(a(0, j) - b(0, j))));
  }
  return worst;
}

}  // namespace shapegeo
