#pragma once

// Spectral representation of smooth periodic functions on the circle and the
// Sobolev pairings built on top of it.
//
// Fourier convention: f_hat[k] = (1/2pi) * integral f(t) exp(-i k t) dt, realised
// by the trapezoid rule on n uniform nodes, so f_hat[k] = (1/n) sum_j f_j e^{-ik t_j}.
// Coefficients are stored in FFT order: index j holds wavenumber j for
// j <= n/2 and j - n otherwise.

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <vector>

namespace shapegeo {

using Vec = Eigen::VectorXd;

class PeriodicGrid {
 public:
  /// Throws InvalidArgument unless n_samples is a power of two and >= 4.
  explicit PeriodicGrid(int n_samples);

  int size() const noexcept { return n_; }
  double spacing() const noexcept;
  double node(int j) const noexcept;
  Vec nodes() const;

  friend bool operator==(const PeriodicGrid& a, const PeriodicGrid& b) noexcept {
    return a.n_ == b.n_;
  }

 private:
  int n_;
};

/// Wavenumber held at FFT-order index `index` on an n-point grid.
int wavenumber(int index, int n) noexcept;

class SpectralCoeffs {
 public:
  SpectralCoeffs(PeriodicGrid grid, Eigen::MatrixXcd coeffs);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return static_cast<int>(coeffs_.rows()); }
  const Eigen::MatrixXcd& data() const noexcept { return coeffs_; }

  /// Coefficient of `component` at wavenumber k in (-n/2, n/2].
  std::complex<double> at(int component, int k) const;

 private:
  PeriodicGrid grid_;
  Eigen::MatrixXcd coeffs_;  // dim x n, FFT order
};

/// R^d-valued function on the circle, held as samples on a uniform grid.
class PeriodicFunction {
 public:
  /// `values` is dim x n_samples; throws on size mismatch or non-finite entries.
  PeriodicFunction(PeriodicGrid grid, Eigen::MatrixXd values);

  static PeriodicFunction zero(PeriodicGrid grid, int dim);
  static PeriodicFunction constant(PeriodicGrid grid, const Vec& value);
  static PeriodicFunction sample(PeriodicGrid grid, const std::function<double(double)>& f);
  static PeriodicFunction sample(PeriodicGrid grid, int dim,
                                 const std::function<Vec(double)>& f);
  /// Inverse of flat(): node-major layout (x0, y0, x1, y1, ...).
  static PeriodicFunction from_flat(PeriodicGrid grid, int dim, const Vec& flat);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return static_cast<int>(values_.rows()); }
  int size() const noexcept { return grid_.size(); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  double operator()(int component, int j) const { return values_(component, j); }
  Eigen::VectorXd at_node(int j) const { return values_.col(j); }
  Vec flat() const;

  PeriodicFunction& operator+=(const PeriodicFunction& other);
  PeriodicFunction& operator-=(const PeriodicFunction& other);
  PeriodicFunction& operator*=(double s);

  friend PeriodicFunction operator+(PeriodicFunction a, const PeriodicFunction& b) {
    return a += b;
  }
  friend PeriodicFunction operator-(PeriodicFunction a, const PeriodicFunction& b) {
    return a -= b;
  }
  friend PeriodicFunction operator*(double s, PeriodicFunction a) { return a *= s; }

 private:
  PeriodicGrid grid_;
  Eigen::MatrixXd values_;
};

SpectralCoeffs transform(const PeriodicFunction& f);
PeriodicFunction inverse_transform(const SpectralCoeffs& coeffs);

/// Spectral derivative, f_hat[k] -> (ik)^order f_hat[k]. The Nyquist mode is
/// dropped for odd orders. Inputs are assumed band-limited to n/4.
PeriodicFunction derivative(const PeriodicFunction& f, int order = 1);

/// sum_k (1 + k^2)^q Re(f_hat[k] conj(g_hat[k])), summed over components.
/// q = 0 is (1/2pi) times the L2 pairing. Throws for q < 0.
double sobolev_inner_product(const PeriodicFunction& f, const PeriodicFunction& g, double q);

/// (1/2pi) integral f.g + f^(q).g^(q). For q = 0 the two terms coincide and the
/// plain L2 pairing (1/2pi) integral f.g is returned.
double sobolev_inner_product_integer(const PeriodicFunction& f, const PeriodicFunction& g,
                                     int q);

double sobolev_norm(const PeriodicFunction& f, double q);

/// Mode weight of the integer-order pairing relative to the Fourier one,
/// (1 + k^{2q}) / (1 + k^2)^q (1 for q = 0).
double sobolev_weight_ratio(int k, int q);

/// Constant C_q = (sum_k (1 + k^2)^{-q})^{1/2} over the grid's represented modes;
/// sup_norm(f) <= C_q * ||f||_{H^q}.
double embedding_constant(const PeriodicGrid& grid, double q);

/// Trigonometric interpolant of f sampled on another grid. Modes above the
/// target's band are truncated; the Nyquist mode is split symmetrically when
/// refining so real data stays real.
PeriodicFunction resample(const PeriodicFunction& f, const PeriodicGrid& target);

PeriodicFunction pointwise_multiply(const PeriodicFunction& f, const PeriodicFunction& g);

/// Max over nodes of the Euclidean norm of the sampled vector.
double sup_norm(const PeriodicFunction& f);

/// Evaluates the trigonometric interpolant of a PeriodicFunction at arbitrary
/// points (radians, any real value).
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const PeriodicFunction& f);

  double operator()(double x, int component = 0) const;
  Vec evaluate(double x) const;
  int dim() const noexcept { return static_cast<int>(modes_.size()); }

 private:
  struct Mode {
    int k;
    std::complex<double> c;  // contributes Re(c e^{ikx})
  };
  struct Component {
    double mean = 0.0;
    std::vector<Mode> sparse;               // active modes only
    std::vector<std::complex<double>> dense;  // index k, 1..kmax
  };
  double eval_component(const Component& comp, double x) const;

  std::vector<Component> modes_;
};

}  // namespace shapegeo
