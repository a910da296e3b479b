#pragma once

// Geodesic problems on the space of discretized closed curves. A curve with n
// samples in R^d is flattened node-major into R^{n d} so the generic solvers in
// geodesics.hpp can run on it.

#include <vector>

#include "shapegeo/curves.hpp"
#include "shapegeo/geodesics.hpp"

namespace shapegeo {

/// L2 metric G_c(h, k) = integral <h, k> |c'| on flattened curves, with the
/// analytic variation. Points that are not immersed raise NotImmersed.
///
/// A positive speed_floor replaces |c'| by sqrt(|c'|^2 + speed_floor^2), a
/// smooth majorant of the L2 weight. Minimisers of the L2 energy develop cusps
/// where |c'| -> 0 and the plain weight has a kink there; the smoothed metric
/// keeps gradient descent moving.
MetricOracle l2_curve_oracle(PeriodicGrid grid, int dim, double speed_floor = 0.0);

/// Flat control metric (2pi/n) sum_j <h_j, k_j>, i.e. the L2 metric without the
/// arc-length weight.
MetricOracle flat_curve_oracle(PeriodicGrid grid, int dim);

enum class CurveMetric { L2, Flat };

/// Smooth periodic sawtooth of unit amplitude built from its first `terms`
/// Fourier modes (band limit `terms`).
double smooth_sawtooth(double x, int terms = 3);

/// Linear homotopy from `from` to `to` plus a normal offset
/// amplitude * sin(pi t) * sawtooth(teeth * theta, terms) along the unit normal of
/// the interpolated curve.
Path sawtooth_homotopy(const Curve& from, const Curve& to, int teeth, double amplitude,
                       int n_steps, int terms = 3);

/// Path refined to `to` in space (spectral resampling of every curve) and to
/// n_steps in time (linear interpolation between the original time nodes).
Path refine_path(const Path& p, const PeriodicGrid& from, const PeriodicGrid& to, int n_steps);

struct VanishingLevel {
  int teeth = 0;
  int n_samples = 0;
  int n_steps = 0;
  double initial_length = 0.0;
  double length = 0.0;
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct VanishingOptions {
  int levels = 3;
  int teeth_factor = 4;      // teeth k = teeth_factor^level: 1, 4, 16, ...
  double shift = 0.5;        // translation of the target circle along e_1
  double amplitude = 0.25;   // tooth amplitude is amplitude / k
  int sawtooth_terms = 2;
  int min_samples = 32;  // doubled per level, and at least 4 * k * sawtooth_terms
  int min_steps = 8;     // doubled per level, and at least 2 * k
  /// Start each level from the previous level's minimiser (refined to the new
  /// resolution) plus the level's teeth, rather than from a fresh homotopy.
  bool warm_start = false;
  /// speed_floor of the L2 oracle the minimiser descends on; reported lengths
  /// and energies always use the exact L2 metric.
  double speed_floor = 0.2;
  BvpOptions bvp = [] {
    BvpOptions b;
    b.tolerance = 1e-7;
    b.max_iterations = 4000;
    b.throw_on_nonconvergence = false;
    b.stall_window = 50;
    return b;
  }();
};

/// Minimised path lengths between the unit circle and its translate for an
/// increasingly oscillatory family of initial homotopies, at increasing
/// space/time resolution. Under the L2 metric the sequence decreases; under the
/// flat control metric every level returns the straight-line distance.
std::vector<VanishingLevel> vanishing_distance_experiment(CurveMetric metric,
                                                          const VanishingOptions& opts = {});

}  // namespace shapegeo
