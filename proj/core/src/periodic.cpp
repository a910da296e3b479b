#include "shapegeo/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "shapegeo/errors.hpp"

namespace shapegeo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT. sign = -1 forward, +1 backward (unscaled).
void fft(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    std::vector<std::complex<double>> twiddle(half);
    for (std::size_t k = 0; k < half; ++k) {
      twiddle[k] = std::polar(1.0, sign * kTwoPi * static_cast<double>(k) /
                                       static_cast<double>(len));
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + half] * twiddle[k];
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
}

void require_same_shape(const PeriodicFunction& f, const PeriodicFunction& g, const char* op) {
  if (!(f.grid() == g.grid()) || f.dim() != g.dim()) {
    throw InvalidArgument(std::string(op) + ": grid or codomain dimension mismatch");
  }
}

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotImmersed: return "NotImmersed";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::OutOfChart: return "OutOfChart";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::MissingVariation: return "MissingVariation";
    case ErrorKind::StepCollapse: return "StepCollapse";
    case ErrorKind::VanishingField: return "VanishingField";
    case ErrorKind::NotPeriodic: return "NotPeriodic";
    case ErrorKind::NonDecaying: return "NonDecaying";
    case ErrorKind::DegenerateConfig: return "DegenerateConfig";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// PeriodicGrid

PeriodicGrid::PeriodicGrid(int n_samples) : n_(n_samples) {
  if (n_samples < 4 || !is_power_of_two(n_samples)) {
    throw InvalidArgument("PeriodicGrid: n_samples must be a power of two >= 4, got " +
                          std::to_string(n_samples));
  }
}

double PeriodicGrid::spacing() const noexcept { return kTwoPi / n_; }

double PeriodicGrid::node(int j) const noexcept { return kTwoPi * j / n_; }

Vec PeriodicGrid::nodes() const {
  Vec t(n_);
  for (int j = 0; j < n_; ++j) t[j] = node(j);
  return t;
}

int wavenumber(int index, int n) noexcept { return index <= n / 2 ? index : index - n; }

// ---------------------------------------------------------------------------
// SpectralCoeffs

SpectralCoeffs::SpectralCoeffs(PeriodicGrid grid, Eigen::MatrixXcd coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.cols() != grid_.size()) {
    throw InvalidArgument("SpectralCoeffs: column count must equal grid size");
  }
}

std::complex<double> SpectralCoeffs::at(int component, int k) const {
  const int n = grid_.size();
  if (k <= -n / 2 || k > n / 2) {
    throw InvalidArgument("SpectralCoeffs::at: wavenumber out of range");
  }
  return coeffs_(component, k >= 0 ? k : k + n);
}

// ---------------------------------------------------------------------------
// PeriodicFunction

PeriodicFunction::PeriodicFunction(PeriodicGrid grid, Eigen::MatrixXd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.cols() != grid_.size() || values_.rows() < 1) {
    throw InvalidArgument("PeriodicFunction: values must be dim x n_samples");
  }
  if (!values_.allFinite()) {
    throw InvalidArgument("PeriodicFunction: non-finite sample");
  }
}

PeriodicFunction PeriodicFunction::zero(PeriodicGrid grid, int dim) {
  return PeriodicFunction(grid, Eigen::MatrixXd::Zero(dim, grid.size()));
}

PeriodicFunction PeriodicFunction::constant(PeriodicGrid grid, const Vec& value) {
  return PeriodicFunction(grid, value.replicate(1, grid.size()));
}

PeriodicFunction PeriodicFunction::sample(PeriodicGrid grid,
                                          const std::function<double(double)>& f) {
  Eigen::MatrixXd v(1, grid.size());
  for (int j = 0; j < grid.size(); ++j) v(0, j) = f(grid.node(j));
  return PeriodicFunction(grid, std::move(v));
}

PeriodicFunction PeriodicFunction::sample(PeriodicGrid grid, int dim,
                                          const std::function<Vec(double)>& f) {
  Eigen::MatrixXd v(dim, grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const Vec x = f(grid.node(j));
    if (x.size() != dim) throw InvalidArgument("PeriodicFunction::sample: wrong value size");
    v.col(j) = x;
  }
  return PeriodicFunction(grid, std::move(v));
}

PeriodicFunction PeriodicFunction::from_flat(PeriodicGrid grid, int dim, const Vec& flat) {
  if (flat.size() != static_cast<Eigen::Index>(dim) * grid.size()) {
    throw InvalidArgument("PeriodicFunction::from_flat: size mismatch");
  }
  return PeriodicFunction(grid, Eigen::Map<const Eigen::MatrixXd>(flat.data(), dim, grid.size()));
}

Vec PeriodicFunction::flat() const { return values_.reshaped(); }

PeriodicFunction& PeriodicFunction::operator+=(const PeriodicFunction& other) {
  require_same_shape(*this, other, "operator+");
  values_ += other.values_;
  return *this;
}

PeriodicFunction& PeriodicFunction::operator-=(const PeriodicFunction& other) {
  require_same_shape(*this, other, "operator-");
  values_ -= other.values_;
  return *this;
}

PeriodicFunction& PeriodicFunction::operator*=(double s) {
  values_ *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// Transforms

SpectralCoeffs transform(const PeriodicFunction& f) {
  const int n = f.size();
  Eigen::MatrixXcd out(f.dim(), n);
  std::vector<std::complex<double>> buf(n);
  for (int c = 0; c < f.dim(); ++c) {
    for (int j = 0; j < n; ++j) buf[j] = f(c, j);
    fft(buf, -1);
    for (int j = 0; j < n; ++j) out(c, j) = buf[j] / static_cast<double>(n);
  }
  return SpectralCoeffs(f.grid(), std::move(out));
}

PeriodicFunction inverse_transform(const SpectralCoeffs& coeffs) {
  const int n = coeffs.grid().size();
  Eigen::MatrixXd out(coeffs.dim(), n);
  std::vector<std::complex<double>> buf(n);
  for (int c = 0; c < coeffs.dim(); ++c) {
    for (int j = 0; j < n; ++j) buf[j] = coeffs.data()(c, j);
    fft(buf, +1);
    for (int j = 0; j < n; ++j) out(c, j) = buf[j].real();
  }
  return PeriodicFunction(coeffs.grid(), std::move(out));
}

PeriodicFunction derivative(const PeriodicFunction& f, int order) {
  if (order < 1) throw InvalidArgument("derivative: order must be positive");
  const int n = f.size();
  auto coeffs = transform(f).data();
  for (int j = 0; j < n; ++j) {
    const int k = wavenumber(j, n);
    std::complex<double> factor = std::pow(std::complex<double>(0.0, k), order);
    if (k == n / 2 && order % 2 == 1) factor = 0.0;
    coeffs.col(j) *= factor;
  }
  return inverse_transform(SpectralCoeffs(f.grid(), std::move(coeffs)));
}

namespace {

template <typename Weight>
double weighted_mode_sum(const PeriodicFunction& f, const PeriodicFunction& g, Weight weight) {
  const auto fh = transform(f);
  const auto gh = transform(g);
  const int n = f.size();
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double w = weight(wavenumber(j, n));
    double mode = 0.0;
    for (int c = 0; c < f.dim(); ++c) {
      mode += (fh.data()(c, j) * std::conj(gh.data()(c, j))).real();
    }
    sum += w * mode;
  }
  return sum;
}

}  // namespace

double sobolev_inner_product(const PeriodicFunction& f, const PeriodicFunction& g, double q) {
  require_same_shape(f, g, "sobolev_inner_product");
  if (!(q >= 0.0)) throw InvalidArgument("sobolev_inner_product: q must be >= 0");
  return weighted_mode_sum(f, g, [q](int k) { return std::pow(1.0 + double(k) * k, q); });
}

double sobolev_inner_product_integer(const PeriodicFunction& f, const PeriodicFunction& g,
                                     int q) {
  require_same_shape(f, g, "sobolev_inner_product_integer");
  if (q < 0) throw InvalidArgument("sobolev_inner_product_integer: q must be >= 0");
  const int n = f.size();
  const double inv_n = 1.0 / n;
  double l2 = f.values().cwiseProduct(g.values()).sum() * inv_n;
  if (q == 0) return l2;
  const auto fq = derivative(f, q);
  const auto gq = derivative(g, q);
  return l2 + fq.values().cwiseProduct(gq.values()).sum() * inv_n;
}

double sobolev_norm(const PeriodicFunction& f, double q) {
  return std::sqrt(std::max(0.0, sobolev_inner_product(f, f, q)));
}

double sobolev_weight_ratio(int k, int q) {
  if (q < 0) throw InvalidArgument("sobolev_weight_ratio: q must be >= 0");
  if (q == 0) return 1.0;
  const double kk = double(k) * k;
  return (1.0 + std::pow(kk, q)) / std::pow(1.0 + kk, q);
}

double embedding_constant(const PeriodicGrid& grid, double q) {
  const int n = grid.size();
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const int k = wavenumber(j, n);
    s += std::pow(1.0 + double(k) * k, -q);
  }
  return std::sqrt(s);
}

PeriodicFunction resample(const PeriodicFunction& f, const PeriodicGrid& target) {
  const int n = f.size();
  const int m = target.size();
  if (m == n) return PeriodicFunction(target, f.values());
  const auto src = transform(f).data();
  Eigen::MatrixXcd dst = Eigen::MatrixXcd::Zero(f.dim(), m);
  const int band = std::min(n, m) / 2;
  for (int j = 0; j < n; ++j) {
    const int k = wavenumber(j, n);
    if (std::abs(k) > band) continue;
    if (std::abs(k) == band) {
      if (m > n) {
        // split the source Nyquist mode over +-band
        dst.col(band) += 0.5 * src.col(j);
        dst.col(m - band) += 0.5 * src.col(j);
      } else {
        dst.col(band) += src.col(j);  // +-band alias onto the target Nyquist
      }
      continue;
    }
    dst.col(k >= 0 ? k : m + k) += src.col(j);
  }
  return inverse_transform(SpectralCoeffs(target, std::move(dst)));
}

PeriodicFunction pointwise_multiply(const PeriodicFunction& f, const PeriodicFunction& g) {
  if (f.dim() != 1 || g.dim() != 1) {
    throw InvalidArgument("pointwise_multiply: scalar-valued functions required");
  }
  require_same_shape(f, g, "pointwise_multiply");
  return PeriodicFunction(f.grid(), f.values().cwiseProduct(g.values()));
}

double sup_norm(const PeriodicFunction& f) { return f.values().colwise().norm().maxCoeff(); }

// ---------------------------------------------------------------------------
// TrigInterpolant

TrigInterpolant::TrigInterpolant(const PeriodicFunction& f) {
  const int n = f.size();
  const auto coeffs = transform(f);
  modes_.resize(f.dim());
  for (int c = 0; c < f.dim(); ++c) {
    auto& comp = modes_[c];
    comp.mean = coeffs.data()(c, 0).real();
    double scale = std::abs(comp.mean);
    std::vector<std::complex<double>> dense(n / 2 + 1, 0.0);
    for (int k = 1; k < n / 2; ++k) dense[k] = 2.0 * coeffs.data()(c, k);
    dense[n / 2] = coeffs.data()(c, n / 2).real();
    for (const auto& z : dense) scale = std::max(scale, std::abs(z));
    const double cutoff = 1e-15 * scale;
    int kmax = 0;
    for (int k = 1; k <= n / 2; ++k) {
      if (std::abs(dense[k]) > cutoff) {
        comp.sparse.push_back({k, dense[k]});
        kmax = k;
      }
    }
    dense.resize(kmax + 1);
    comp.dense = std::move(dense);
  }
}

double TrigInterpolant::eval_component(const Component& comp, double x) const {
  double sum = comp.mean;
  if (comp.sparse.size() <= 8) {
    for (const auto& m : comp.sparse) {
      sum += m.c.real() * std::cos(m.k * x) - m.c.imag() * std::sin(m.k * x);
    }
    return sum;
  }
  const std::complex<double> step = std::polar(1.0, x);
  std::complex<double> e = step;
  for (std::size_t k = 1; k < comp.dense.size(); ++k) {
    sum += (comp.dense[k] * e).real();
    e *= step;
  }
  return sum;
}

double TrigInterpolant::operator()(double x, int component) const {
  return eval_component(modes_.at(component), x);
}

Vec TrigInterpolant::evaluate(double x) const {
  Vec out(dim());
  for (int c = 0; c < dim(); ++c) out[c] = eval_component(modes_[c], x);
  return out;
}

}  // namespace shapegeo
