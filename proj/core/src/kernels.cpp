#include "shapegeo/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <string>

namespace shapegeo {

namespace {

Eigen::MatrixXd as_block(int dim, const Vec& flat, const char* op) {
  if (dim < 1 || flat.size() % dim != 0) {
    throw InvalidArgument(std::string(op) + ": flat size is not a multiple of dim");
  }
  return Eigen::Map<const Eigen::MatrixXd>(flat.data(), dim, flat.size() / dim);
}

Vec as_flat(const Eigen::MatrixXd& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

void require_block(const LandmarkConfig& q, const Eigen::MatrixXd& h, const char* op) {
  if (h.rows() != q.dim() || h.cols() != q.size()) {
    throw InvalidArgument(std::string(op) + ": tangent shape does not match configuration");
  }
  if (!h.allFinite()) throw InvalidArgument(std::string(op) + ": non-finite tangent");
}

// Scalar pattern S_ij = slope(r_ij) <q_i - q_j, l_i - l_j> of D_l K.
Eigen::MatrixXd gram_variation(const Kernel& k, const Eigen::MatrixXd& q, const Eigen::MatrixXd& l) {
  const auto n = q.cols();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Vec dq = q.col(i) - q.col(j);
      const double v = k.radial_slope(dq.norm()) * dq.dot(l.col(i) - l.col(j));
      s(i, j) = s(j, i) = v;
    }
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Kernels

Kernel Kernel::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("Kernel: sigma must be > 0");
  return Kernel(KernelKind::Gaussian, sigma, 0);
}

Kernel Kernel::sobolev(int order, double scale) {
  if (order != 1 && order != 2) throw InvalidArgument("Kernel: Sobolev order must be 1 or 2");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("Kernel: scale must be > 0");
  return Kernel(KernelKind::Sobolev, scale, order);
}

double Kernel::profile(double r) const {
  if (kind_ == KernelKind::Gaussian) return std::exp(-0.5 * r * r / (width_ * width_));
  const double rho = r / width_;
  return order_ == 1 ? 0.5 * std::exp(-rho) : 0.25 * (1.0 + rho) * std::exp(-rho);
}

double Kernel::radial_slope(double r) const {
  if (kind_ == KernelKind::Gaussian) return -profile(r) / (width_ * width_);
  const double rho = r / width_;
  if (order_ == 1) return -0.5 * std::exp(-rho) / (width_ * r);
  return -0.25 * std::exp(-rho) / (width_ * width_);
}

double sobolev_kernel_eval(int n, double x, double y) {
  if (n != 1 && n != 2) throw InvalidArgument("sobolev_kernel_eval: order must be 1 or 2");
  return Kernel::sobolev(n).profile(std::abs(x - y));
}

// ---------------------------------------------------------------------------
// Configurations and Gram matrices

LandmarkConfig::LandmarkConfig(Eigen::MatrixXd points) : q_(std::move(points)), min_sep_(0.0) {
  if (q_.rows() < 1 || q_.cols() < 1) throw InvalidArgument("LandmarkConfig: need N >= 1 points");
  if (!q_.allFinite()) throw InvalidArgument("LandmarkConfig: non-finite coordinates");
  min_sep_ = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < q_.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < q_.cols(); ++j) {
      min_sep_ = std::min(min_sep_, (q_.col(i) - q_.col(j)).norm());
    }
  }
  if (!(min_sep_ > 1e-8)) {
    throw DegenerateConfig("LandmarkConfig: landmarks closer than 1e-8");
  }
}

LandmarkConfig LandmarkConfig::from_flat(int dim, const Vec& flat) {
  return LandmarkConfig(as_block(dim, flat, "LandmarkConfig::from_flat"));
}

Vec LandmarkConfig::flat() const { return as_flat(q_); }

GramMatrix::GramMatrix(const Kernel& k, const LandmarkConfig& q)
    : dim_(q.dim()), scalar_(q.size(), q.size()) {
  const auto& p = q.points();
  for (int i = 0; i < q.size(); ++i) {
    scalar_(i, i) = k.at_zero();
    for (int j = i + 1; j < q.size(); ++j) scalar_(i, j) = scalar_(j, i) = k(p.col(i), p.col(j));
  }
  llt_.compute(scalar_);
  if (llt_.info() != Eigen::Success) {
    throw DegenerateConfig("GramMatrix: kernel matrix is not positive definite");
  }
}

Eigen::MatrixXd GramMatrix::full() const {
  const int n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n * dim_, n * dim_);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m.block(i * dim_, j * dim_, dim_, dim_).diagonal().setConstant(scalar_(i, j));
    }
  }
  return m;
}

double GramMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scalar_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::MatrixXd GramMatrix::solve(const Eigen::MatrixXd& h) const {
  // columns are landmarks, so solve with the transpose
  return llt_.solve(h.transpose()).transpose();
}

Eigen::MatrixXd GramMatrix::apply(const Eigen::MatrixXd& p) const { return p * scalar_; }

GramMatrix gram_assemble(const Kernel& k, const LandmarkConfig& q) { return GramMatrix(k, q); }

// ---------------------------------------------------------------------------
// Expansions, lifts and the induced metric

Vec KernelExpansion::operator()(const Kernel& k, const Vec& x) const {
  Vec out = Vec::Zero(momenta.rows());
  for (Eigen::Index i = 0; i < centres.cols(); ++i) out += k(x, centres.col(i)) * momenta.col(i);
  return out;
}

double rkhs_inner(const Kernel& k, const KernelExpansion& a, const KernelExpansion& b) {
  if (a.momenta.rows() != b.momenta.rows()) throw InvalidArgument("rkhs_inner: dimension mismatch");
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.centres.cols(); ++i) {
    for (Eigen::Index j = 0; j < b.centres.cols(); ++j) {
      s += k(a.centres.col(i), b.centres.col(j)) * a.momenta.col(i).dot(b.momenta.col(j));
    }
  }
  return s;
}

HorizontalLift horizontal_lift(const Kernel& k, const LandmarkConfig& q, const Eigen::MatrixXd& h) {
  require_block(q, h, "horizontal_lift");
  const auto gram = gram_assemble(k, q);
  Eigen::MatrixXd p = gram.solve(h);
  return {p, KernelExpansion{q.points(), p}};
}

double induced_metric(const Kernel& k, const LandmarkConfig& q, const Eigen::MatrixXd& h,
                      const Eigen::MatrixXd& h2) {
  require_block(q, h, "induced_metric");
  require_block(q, h2, "induced_metric");
  return gram_assemble(k, q).solve(h).cwiseProduct(h2).sum();
}

VerticalSplit vertical_project(const Kernel& k, const LandmarkConfig& q, const KernelExpansion& x) {
  if (x.centres.rows() != q.dim() || x.momenta.rows() != q.dim() ||
      x.centres.cols() != x.momenta.cols() || x.centres.cols() < 1) {
    throw InvalidArgument("vertical_project: input is not a kernel expansion on R^d");
  }
  Eigen::MatrixXd values(q.dim(), q.size());
  for (int i = 0; i < q.size(); ++i) values.col(i) = x(k, q.points().col(i));
  auto hor = horizontal_lift(k, q, values).field;

  KernelExpansion ver;
  const auto m = x.centres.cols();
  ver.centres.resize(q.dim(), m + q.size());
  ver.momenta.resize(q.dim(), m + q.size());
  ver.centres << x.centres, q.points();
  ver.momenta << x.momenta, -hor.momenta;
  const double orth = rkhs_inner(k, hor, ver);
  return {std::move(hor), std::move(ver), orth};
}

// ---------------------------------------------------------------------------
// Geodesic oracle

MetricOracle landmark_metric_oracle(const Kernel& k, int dim, int n_landmarks) {
  if (dim < 1 || n_landmarks < 1) throw InvalidArgument("landmark_metric_oracle: bad shape");
  MetricOracle o;
  o.dim = dim * n_landmarks;
  auto config = [dim](const Vec& x) { return LandmarkConfig::from_flat(dim, x); };
  auto block = [dim](const Vec& v) { return as_block(dim, v, "landmark_metric_oracle"); };

  o.metric = [=](const Vec& x, const Vec& h, const Vec& kk) {
    const auto q = config(x);
    return gram_assemble(k, q).solve(block(h)).cwiseProduct(block(kk)).sum();
  };
  o.lower = [=](const Vec& x, const Vec& h) -> Vec {
    return as_flat(gram_assemble(k, config(x)).solve(block(h)));
  };
  o.raise = [=](const Vec& x, const Vec& p) -> Vec {
    return as_flat(gram_assemble(k, config(x)).apply(block(p)));
  };
  // D_l G(h, k) = -a^T (D_l K) b with a = K^{-1} h, b = K^{-1} k.
  o.variation = [=](const Vec& x, const Vec& l, const Vec& h, const Vec& kk) {
    const auto q = config(x);
    const auto gram = gram_assemble(k, q);
    const Eigen::MatrixXd a = gram.solve(block(h)), b = gram.solve(block(kk));
    const Eigen::MatrixXd s = gram_variation(k, q.points(), block(l));
    return -(a.transpose() * b).cwiseProduct(s).sum();
  };
  // Gradient in l: entry m is -sum_j (s_mj + s_jm) slope_mj (q_m - q_j), s_ij = <a_i, b_j>.
  o.variation_gradient = [=](const Vec& x, const Vec& h, const Vec& kk) -> Vec {
    const auto q = config(x);
    const auto gram = gram_assemble(k, q);
    const Eigen::MatrixXd a = gram.solve(block(h)), b = gram.solve(block(kk));
    const Eigen::MatrixXd s = a.transpose() * b;
    const auto& p = q.points();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, n_landmarks);
    for (int m = 0; m < n_landmarks; ++m) {
      for (int j = 0; j < n_landmarks; ++j) {
        if (j == m) continue;
        const Vec dq = p.col(m) - p.col(j);
        g.col(m) -= (s(m, j) + s(j, m)) * k.radial_slope(dq.norm()) * dq;
      }
    }
    return as_flat(g);
  };
  // Covector of k -> D_l G(h, k): -K^{-1} (D_l K) a.
  o.variation_lower = [=](const Vec& x, const Vec& l, const Vec& h) -> Vec {
    const auto q = config(x);
    const auto gram = gram_assemble(k, q);
    const Eigen::MatrixXd a = gram.solve(block(h));
    const Eigen::MatrixXd s = gram_variation(k, q.points(), block(l));
    return as_flat(-gram.solve(a * s));
  };
  return o;
}

AdmissibilityBound admissibility_bound_check(const Kernel& k, const LandmarkConfig& q,
                                             const Eigen::MatrixXd& h) {
  require_block(q, h, "admissibility_bound_check");
  const double g = induced_metric(k, q, h, h);
  const double lhs = h.size() ? h.colwise().norm().maxCoeff() : 0.0;
  return {lhs, std::sqrt(k.at_zero()) * std::sqrt(std::max(0.0, g))};
}

}  // namespace shapegeo
