#include "subcorr/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "subcorr/threading.hpp"

namespace subcorr {
namespace kernels {

namespace serial {

void gradient_1d(const double* u, int n, double* px) {
  for (int i = 0; i + 1 < n; ++i) px[i] = u[i + 1] - u[i];
  if (n > 0) px[n - 1] = 0.0;
}

void gradient_2d(const double* u, int rows, int cols, double* px, double* py) {
  for (int i = 0; i < rows; ++i) {
    const int r = i * cols;
    for (int j = 0; j < cols; ++j) {
      px[r + j] = (i + 1 < rows) ? u[r + cols + j] - u[r + j] : 0.0;
      py[r + j] = (j + 1 < cols) ? u[r + j + 1] - u[r + j] : 0.0;
    }
  }
}

void divergence_1d(const double* p, int n, double* out) {
  if (n == 1) {
    out[0] = 0.0;
    return;
  }
  out[0] = p[0];
  for (int i = 1; i + 1 < n; ++i) out[i] = p[i] - p[i - 1];
  out[n - 1] = -p[n - 2];
}

void divergence_2d(const double* px, const double* py, int rows, int cols, double* out) {
  for (int i = 0; i < rows; ++i) {
    const int r = i * cols;
    for (int j = 0; j < cols; ++j) {
      double dx;
      if (rows == 1) dx = 0.0;
      else if (i == 0) dx = px[r + j];
      else if (i == rows - 1) dx = -px[r - cols + j];
      else dx = px[r + j] - px[r - cols + j];
      double dy;
      if (cols == 1) dy = 0.0;
      else if (j == 0) dy = py[r + j];
      else if (j == cols - 1) dy = -py[r + j - 1];
      else dy = py[r + j] - py[r + j - 1];
      out[r + j] = dx + dy;
    }
  }
}

double dual_update_1d(double* p, const double* w, int n, double tau) {
  double inc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double next = (p[i] + tau * w[i]) / (1.0 + tau * std::fabs(w[i]));
    inc = std::max(inc, std::fabs(next - p[i]));
    p[i] = next;
  }
  return inc;
}

double dual_update_2d(double* px, double* py, const double* wx, const double* wy,
                      int nodes, double tau) {
  double inc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double mag = std::sqrt(wx[i] * wx[i] + wy[i] * wy[i]);
    const double d = 1.0 + tau * mag;
    const double nx = (px[i] + tau * wx[i]) / d;
    const double ny = (py[i] + tau * wy[i]) / d;
    const double dx = nx - px[i];
    const double dy = ny - py[i];
    inc = std::max(inc, std::sqrt(dx * dx + dy * dy));
    px[i] = nx;
    py[i] = ny;
  }
  return inc;
}

void soft_threshold_vec(const double* x, int n, double theta, double* out) {
  for (int i = 0; i < n; ++i) {
    const double a = std::fabs(x[i]);
    out[i] = a > theta ? (x[i] > 0 ? x[i] - theta : x[i] + theta) : 0.0;
  }
}

void soft_threshold_vec_weighted(const double* x, int n, double theta,
                                 const double* w, double* out) {
  for (int i = 0; i < n; ++i) {
    const double t = theta * w[i];
    const double a = std::fabs(x[i]);
    out[i] = a > t ? (x[i] > 0 ? x[i] - t : x[i] + t) : 0.0;
  }
}

void clamp_vec(const double* x, int n, double bound, double* out) {
  for (int i = 0; i < n; ++i) out[i] = std::clamp(x[i], -bound, bound);
}

void clamp_vec_weighted(const double* x, int n, double bound, const double* w, double* out) {
  for (int i = 0; i < n; ++i) {
    const double b = bound * w[i];
    out[i] = std::clamp(x[i], -b, b);
  }
}

void matvec(const double* a, int rows, int cols, const double* x, double* y) {
  for (int i = 0; i < rows; ++i) {
    const double* row = a + static_cast<std::size_t>(i) * cols;
    double s = 0.0;
    for (int j = 0; j < cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

void matvec_adjoint(const double* a, int rows, int cols, const double* x, double* y) {
  for (int j = 0; j < cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += a[static_cast<std::size_t>(i) * cols + j] * x[i];
    y[j] = s;
  }
}

} // namespace serial

namespace omp {

void gradient_1d(const double* u, int n, double* px) {
  const int nt = threading::max_threads();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (int i = 0; i < n - 1; ++i) px[i] = u[i + 1] - u[i];
  if (n > 0) px[n - 1] = 0.0;
}

void gradient_2d(const double* u, int rows, int cols, double* px, double* py) {
  const int nt = threading::max_threads();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (int i = 0; i < rows; ++i) {
    const int r = i * cols;
    for (int j = 0; j < cols; ++j) {
      px[r + j] = (i + 1 < rows) ? u[r + cols + j] - u[r + j] : 0.0;
      py[r + j] = (j + 1 < cols) ? u[r + j + 1] - u[r + j] : 0.0;
    }
  }
}

void divergence_1d(const double* p, int n, double* out) {
  if (n == 1) {
    out[0] = 0.0;
    return;
  }
  const int nt = threading::max_threads();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (int i = 1; i < n - 1; ++i) out[i] = p[i] - p[i - 1];
  out[0] = p[0];
  out[n - 1] = -p[n - 2];
}

void divergence_2d(const double* px, const double* py, int rows, int cols, double* out) {
  const int nt = threading::max_threads();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (int i = 0; i < rows; ++i) {
    const int r = i * cols;
    for (int j = 0; j < cols; ++j) {
      double dx;
      if (rows == 1) dx = 0.0;
      else if (i == 0) dx = px[r + j];
      else if (i == rows - 1) dx = -px[r - cols + j];
      else dx = px[r + j] - px[r - cols + j];
      double dy;
      if (cols == 1) dy = 0.0;
      else if (j == 0) dy = py[r + j];
      else if (j == cols - 1) dy = -py[r + j - 1];
      else dy = py[r + j] - py[r + j - 1];
      out[r + j] = dx + dy;
    }
  }
}

double dual_update_1d(double* p, const double* w, int n, double tau) {
  double inc = 0.0;
  const int nt = threading::max_threads();
#pragma omp parallel for num_threads(nt) schedule(static) reduction(max : inc)
  for (int i = 0; i < n; ++i) {
    const double next = (p[i] + tau * w[i]) / (1.0 + tau * std::fabs(w[i]));
    inc = std::max(inc, std::fabs(next - p[i]));
    p[i] = next;
  }
  return inc;
}

double dual_update_2d(double* px, double* py, const double* wx, const double* wy,
                      int nodes, double tau) {
  double inc = 0.0;
  const int nt = threading::max_threads();
#pragma omp parallel for num_threads(nt) schedule(static) reduction(max : inc)
  for (int i = 0; i < nodes; ++i) {
    const double mag = std::sqrt(wx[i] * wx[i] + wy[i] * wy[i]);
    const double d = 1.0 + tau * mag;
    const double nx = (px[i] + tau * wx[i]) / d;
    const double ny = (py[i] + tau * wy[i]) / d;
    const double dx = nx - px[i];
    const double dy = ny - py[i];
    inc = std::max(inc, std::sqrt(dx * dx + dy * dy));
    px[i] = nx;
    py[i] = ny;
  }
  return inc;
}

void soft_threshold_vec(const double* x, int n, double theta, double* out) {
  const int nt = threading::max_threads();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (int i = 0; i < n; ++i) {
    const double a = std::fabs(x[i]);
    out[i] = a > theta ? (x[i] > 0 ? x[i] - theta : x[i] + theta) : 0.0;
  }
}

void soft_threshold_vec_weighted(const double* x, int n, double theta,
                                 const double* w, double* out) {
  const int nt = threading::max_threads();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (int i = 0; i < n; ++i) {
    const double t = theta * w[i];
    const double a = std::fabs(x[i]);
    out[i] = a > t ? (x[i] > 0 ? x[i] - t : x[i] + t) : 0.0;
  }
}

void clamp_vec(const double* x, int n, double bound, double* out) {
  const int nt = threading::max_threads();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (int i = 0; i < n; ++i) out[i] = std::clamp(x[i], -bound, bound);
}

void clamp_vec_weighted(const double* x, int n, double bound, const double* w, double* out) {
  const int nt = threading::max_threads();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (int i = 0; i < n; ++i) {
    const double b = bound * w[i];
    out[i] = std::clamp(x[i], -b, b);
  }
}

void matvec(const double* a, int rows, int cols, const double* x, double* y) {
  const int nt = threading::max_threads();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (int i = 0; i < rows; ++i) {
    const double* row = a + static_cast<std::size_t>(i) * cols;
    double s = 0.0;
    for (int j = 0; j < cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

void matvec_adjoint(const double* a, int rows, int cols, const double* x, double* y) {
  const int nt = threading::max_threads();
#pragma omp parallel for num_threads(nt) schedule(static)
  for (int j = 0; j < cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < rows; ++i) s += a[static_cast<std::size_t>(i) * cols + j] * x[i];
    y[j] = s;
  }
}

} // namespace omp

namespace {

inline bool go_parallel(std::size_t work) { return threading::workers_for(work) > 1; }

} // namespace

void gradient_1d(const double* u, int n, double* px) {
  go_parallel(n) ? omp::gradient_1d(u, n, px) : serial::gradient_1d(u, n, px);
}

void gradient_2d(const double* u, int rows, int cols, double* px, double* py) {
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  go_parallel(n) ? omp::gradient_2d(u, rows, cols, px, py)
                 : serial::gradient_2d(u, rows, cols, px, py);
}

void divergence_1d(const double* p, int n, double* out) {
  go_parallel(n) ? omp::divergence_1d(p, n, out) : serial::divergence_1d(p, n, out);
}

void divergence_2d(const double* px, const double* py, int rows, int cols, double* out) {
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  go_parallel(n) ? omp::divergence_2d(px, py, rows, cols, out)
                 : serial::divergence_2d(px, py, rows, cols, out);
}

double dual_update_1d(double* p, const double* w, int n, double tau) {
  return go_parallel(n) ? omp::dual_update_1d(p, w, n, tau)
                        : serial::dual_update_1d(p, w, n, tau);
}

double dual_update_2d(double* px, double* py, const double* wx, const double* wy,
                      int nodes, double tau) {
  return go_parallel(nodes) ? omp::dual_update_2d(px, py, wx, wy, nodes, tau)
                            : serial::dual_update_2d(px, py, wx, wy, nodes, tau);
}

void soft_threshold_vec(const double* x, int n, double theta, double* out) {
  go_parallel(n) ? omp::soft_threshold_vec(x, n, theta, out)
                 : serial::soft_threshold_vec(x, n, theta, out);
}

void soft_threshold_vec_weighted(const double* x, int n, double theta,
                                 const double* w, double* out) {
  go_parallel(n) ? omp::soft_threshold_vec_weighted(x, n, theta, w, out)
                 : serial::soft_threshold_vec_weighted(x, n, theta, w, out);
}

void clamp_vec(const double* x, int n, double bound, double* out) {
  go_parallel(n) ? omp::clamp_vec(x, n, bound, out) : serial::clamp_vec(x, n, bound, out);
}

void clamp_vec_weighted(const double* x, int n, double bound, const double* w, double* out) {
  go_parallel(n) ? omp::clamp_vec_weighted(x, n, bound, w, out)
                 : serial::clamp_vec_weighted(x, n, bound, w, out);
}

void matvec(const double* a, int rows, int cols, const double* x, double* y) {
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  go_parallel(n) ? omp::matvec(a, rows, cols, x, y) : serial::matvec(a, rows, cols, x, y);
}

void matvec_adjoint(const double* a, int rows, int cols, const double* x, double* y) {
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  go_parallel(n) ? omp::matvec_adjoint(a, rows, cols, x, y)
                 : serial::matvec_adjoint(a, rows, cols, x, y);
}

double dot(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double norm2sq(const double* a, int n) { return dot(a, a, n); }

double norm2(const double* a, int n) { return std::sqrt(norm2sq(a, n)); }

double sup_norm(const double* a, int n) {
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

double sup_diff(const double* a, const double* b, int n) {
  double m = 0.0;
  for (int i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

} // namespace kernels

void gradient(const GridFunction& u, DualField& out) {
  if (out.shape != u.shape) out = DualField(u.shape);
  if (u.shape.ndim == 1) {
    kernels::gradient_1d(u.v.data(), u.shape.rows, out.x.data());
  } else {
    kernels::gradient_2d(u.v.data(), u.shape.rows, u.shape.cols, out.x.data(), out.y.data());
  }
}

void divergence(const DualField& p, GridFunction& out) {
  if (out.shape != p.shape) out = GridFunction(p.shape);
  if (p.shape.ndim == 1) {
    kernels::divergence_1d(p.x.data(), p.shape.rows, out.v.data());
  } else {
    kernels::divergence_2d(p.x.data(), p.y.data(), p.shape.rows, p.shape.cols, out.v.data());
  }
}

double discrete_tv(const GridFunction& u) {
  const int n = u.size();
  double tv = 0.0;
  if (u.shape.ndim == 1) {
    for (int i = 0; i + 1 < n; ++i) tv += std::fabs(u.v[i + 1] - u.v[i]);
  } else {
    const int rows = u.shape.rows;
    const int cols = u.shape.cols;
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        const double dx = (i + 1 < rows) ? u.at(i + 1, j) - u.at(i, j) : 0.0;
        const double dy = (j + 1 < cols) ? u.at(i, j + 1) - u.at(i, j) : 0.0;
        tv += std::sqrt(dx * dx + dy * dy);
      }
    }
  }
  return tv;
}

} // namespace subcorr
