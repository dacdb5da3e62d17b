#include "subcorr/operators.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "subcorr/kernels.hpp"
#include "subcorr/rng.hpp"

namespace subcorr {

LinearMap LinearMap::identity(int n) {
  LinearMap m;
  m.kind_ = MapKind::identity;
  m.rows_ = m.cols_ = n;
  return m;
}

LinearMap LinearMap::diagonal_mask(std::vector<double> diag) {
  for (double d : diag) {
    if (d != 0.0 && d != 1.0) throw std::invalid_argument("mask entries must be 0 or 1");
  }
  LinearMap m;
  m.kind_ = MapKind::diagonal_mask;
  m.rows_ = m.cols_ = static_cast<int>(diag.size());
  m.a_ = std::move(diag);
  return m;
}

LinearMap LinearMap::dense(int rows, int cols, std::vector<double> row_major) {
  if (static_cast<std::size_t>(rows) * cols != row_major.size())
    throw std::invalid_argument("dense payload size mismatch");
  LinearMap m;
  m.kind_ = MapKind::dense;
  m.rows_ = rows;
  m.cols_ = cols;
  m.a_ = std::move(row_major);
  return m;
}

LinearMap LinearMap::scaled(LinearMap inner, double factor) {
  if (inner.kind_ == MapKind::scaled) {
    // Collapse nested wrappers so repeated rescaling stays flat.
    double f = factor * inner.factor_;
    LinearMap m;
    m.kind_ = MapKind::scaled;
    m.rows_ = inner.rows_;
    m.cols_ = inner.cols_;
    m.inner_ = inner.inner_;
    m.factor_ = f;
    return m;
  }
  LinearMap m;
  m.kind_ = MapKind::scaled;
  m.rows_ = inner.rows_;
  m.cols_ = inner.cols_;
  m.factor_ = factor;
  m.inner_ = std::make_shared<const LinearMap>(std::move(inner));
  return m;
}

void LinearMap::apply(const double* x, double* y) const {
  switch (kind_) {
    case MapKind::identity:
      for (int i = 0; i < rows_; ++i) y[i] = x[i];
      break;
    case MapKind::diagonal_mask:
      for (int i = 0; i < rows_; ++i) y[i] = a_[i] * x[i];
      break;
    case MapKind::dense:
      kernels::matvec(a_.data(), rows_, cols_, x, y);
      break;
    case MapKind::scaled:
      inner_->apply(x, y);
      for (int i = 0; i < rows_; ++i) y[i] *= factor_;
      break;
  }
}

void LinearMap::adjoint_apply(const double* x, double* y) const {
  switch (kind_) {
    case MapKind::identity:
      for (int i = 0; i < cols_; ++i) y[i] = x[i];
      break;
    case MapKind::diagonal_mask:
      for (int i = 0; i < cols_; ++i) y[i] = a_[i] * x[i];
      break;
    case MapKind::dense:
      kernels::matvec_adjoint(a_.data(), rows_, cols_, x, y);
      break;
    case MapKind::scaled:
      inner_->adjoint_apply(x, y);
      for (int i = 0; i < cols_; ++i) y[i] *= factor_;
      break;
  }
}

std::vector<double> LinearMap::apply(const std::vector<double>& x) const {
  assert(static_cast<int>(x.size()) == cols_);
  std::vector<double> y(rows_);
  apply(x.data(), y.data());
  return y;
}

std::vector<double> LinearMap::adjoint_apply(const std::vector<double>& x) const {
  assert(static_cast<int>(x.size()) == rows_);
  std::vector<double> y(cols_);
  adjoint_apply(x.data(), y.data());
  return y;
}

std::vector<double> LinearMap::materialize() const {
  std::vector<double> out(static_cast<std::size_t>(rows_) * cols_, 0.0);
  switch (kind_) {
    case MapKind::identity:
      for (int i = 0; i < rows_; ++i) out[static_cast<std::size_t>(i) * cols_ + i] = 1.0;
      break;
    case MapKind::diagonal_mask:
      for (int i = 0; i < rows_; ++i) out[static_cast<std::size_t>(i) * cols_ + i] = a_[i];
      break;
    case MapKind::dense:
      out = a_;
      break;
    case MapKind::scaled: {
      out = inner_->materialize();
      for (double& v : out) v *= factor_;
      break;
    }
  }
  return out;
}

NormBound estimate_spectral_norm(const LinearMap& t, std::uint64_t seed,
                                 double tol, int max_iters) {
  switch (t.kind()) {
    case MapKind::identity:
      return {1.0, 0, true};
    case MapKind::diagonal_mask: {
      double m = 0.0;
      for (double d : t.payload()) m = std::max(m, std::fabs(d));
      return {m, 0, true};
    }
    case MapKind::scaled: {
      NormBound b = estimate_spectral_norm(t.inner(), seed, tol, max_iters);
      b.value *= std::fabs(t.factor());
      return b;
    }
    case MapKind::dense:
      break;
  }

  const int n = t.cols();
  GaussianSampler rng(seed);
  std::vector<double> x(n), tx(t.rows()), y(n);
  for (double& v : x) v = rng.normal();
  double nx = kernels::norm2(x.data(), n);
  if (nx == 0.0) x[0] = nx = 1.0;
  for (double& v : x) v /= nx;

  double est = 0.0;
  for (int it = 1; it <= max_iters; ++it) {
    t.apply(x.data(), tx.data());
    t.adjoint_apply(tx.data(), y.data());
    const double ny = kernels::norm2(y.data(), n);
    if (ny == 0.0) return {0.0, it, true};  // x in the kernel of T*T: zero map direction
    const double next = std::sqrt(ny);  // ||T*T x|| -> top eigenvalue of T*T = norm^2
    for (int i = 0; i < n; ++i) x[i] = y[i] / ny;
    if (it > 1 && std::fabs(next - est) <= tol * std::max(next, 1e-300)) {
      return {next, it, true};
    }
    est = next;
  }
  return {est, max_iters, false};
}

RescaledProblem rescale_problem(const LinearMap& t, const std::vector<double>& g,
                                double target, std::uint64_t seed) {
  if (!(target > 0.0 && target < 1.0))
    throw std::invalid_argument("rescale target must lie in (0,1)");
  const NormBound nb = estimate_spectral_norm(t, seed);
  if (nb.value == 0.0) return {t, g, 1.0};
  const double c = nb.value / target;
  RescaledProblem out{LinearMap::scaled(t, 1.0 / c), g, c};
  for (double& v : out.g) v /= c;
  return out;
}

} // namespace subcorr
