#include "subcorr/prox.hpp"

#include <cmath>
#include <stdexcept>

#include "subcorr/kernels.hpp"

namespace subcorr {

double soft_threshold(double x, double theta) {
  if (x > theta) return x - theta;
  if (x < -theta) return x + theta;
  return 0.0;
}

std::vector<double> soft_threshold(const std::vector<double>& x, double theta,
                                   const std::vector<double>* weights) {
  std::vector<double> out(x.size());
  const int n = static_cast<int>(x.size());
  if (weights) {
    kernels::soft_threshold_vec_weighted(x.data(), n, theta, weights->data(), out.data());
  } else {
    kernels::soft_threshold_vec(x.data(), n, theta, out.data());
  }
  return out;
}

std::vector<double> l1_project(const std::vector<double>& x, double theta,
                               const std::vector<double>* weights) {
  std::vector<double> out(x.size());
  const int n = static_cast<int>(x.size());
  if (weights) {
    kernels::clamp_vec_weighted(x.data(), n, theta, weights->data(), out.data());
  } else {
    kernels::clamp_vec(x.data(), n, theta, out.data());
  }
  return out;
}

ProjectionResult chambolle_project(const GridFunction& g, double alpha,
                                   const ChambolleConfig& cfg, DualField* dual) {
  if (alpha < 0.0) throw std::invalid_argument("alpha must be nonnegative");
  if (!(cfg.tau > 0.0) || cfg.tau > 0.25)
    throw std::invalid_argument("dual step tau must lie in (0, 1/4]");

  ProjectionResult res;
  res.q = GridFunction(g.shape);
  if (alpha == 0.0) {  // alpha*K = {0}
    if (dual) *dual = DualField(g.shape);
    res.converged = true;
    return res;
  }

  DualField local;
  DualField* p = dual ? dual : &local;
  if (p->shape != g.shape) *p = DualField(g.shape);

  const int n = g.size();
  GridFunction r(g.shape);   // div p - g/alpha
  DualField w(g.shape);
  std::vector<double> goa(g.v);
  for (double& v : goa) v /= alpha;

  for (int it = 1; it <= cfg.max_iters; ++it) {
    res.iterations = it;
    divergence(*p, r);
    for (int i = 0; i < n; ++i) r.v[i] -= goa[i];
    gradient(r, w);
    double inc;
    if (g.shape.ndim == 1) {
      inc = kernels::dual_update_1d(p->x.data(), w.x.data(), n, cfg.tau);
    } else {
      inc = kernels::dual_update_2d(p->x.data(), p->y.data(), w.x.data(), w.y.data(), n,
                                    cfg.tau);
    }
    if (inc < cfg.tol) {
      res.converged = true;
      break;
    }
  }

  divergence(*p, res.q);
  for (int i = 0; i < n; ++i) res.q.v[i] *= alpha;
  return res;
}

ProjectionResult chambolle_project_1d(const GridFunction& g, double alpha,
                                      const ChambolleConfig& cfg, DualField* dual) {
  if (g.shape.ndim != 1) throw std::invalid_argument("expected a 1-D signal");
  return chambolle_project(g, alpha, cfg, dual);
}

ProjectionResult chambolle_project_2d(const GridFunction& g, double alpha,
                                      const ChambolleConfig& cfg, DualField* dual) {
  if (g.shape.ndim != 2) throw std::invalid_argument("expected a 2-D image");
  return chambolle_project(g, alpha, cfg, dual);
}

GridFunction generalized_threshold(const GridFunction& g, double alpha,
                                   const ChambolleConfig& cfg, DualField* dual) {
  ProjectionResult pr = chambolle_project(g, alpha, cfg, dual);
  GridFunction out(g.shape);
  const int n = g.size();
  for (int i = 0; i < n; ++i) out.v[i] = g.v[i] - pr.q.v[i];
  return out;
}

} // namespace subcorr
