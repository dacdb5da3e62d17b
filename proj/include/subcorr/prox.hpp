#pragma once

#include <vector>

#include "subcorr/grid.hpp"

namespace subcorr {

/// Parameters of the semi-implicit dual projection iteration.
struct ChambolleConfig {
  double tau = 0.25;    // dual step; must lie in (0, 1/4]
  double tol = 1e-3;    // stop when the max per-node dual increment falls below
  int max_iters = 2000;
};

struct ProjectionResult {
  GridFunction q;       // the projection
  int iterations = 0;
  bool converged = false;
};

/// Scalar soft threshold: x - sgn(x)*theta for |x| > theta, else 0.
double soft_threshold(double x, double theta);

/// Componentwise soft threshold with optional per-entry weights
/// (threshold theta * w[i]).
std::vector<double> soft_threshold(const std::vector<double>& x, double theta,
                                   const std::vector<double>* weights = nullptr);

/// Componentwise clamp to [-theta*w, theta*w]: the projection onto the polar
/// ball of the weighted l1 seminorm.
std::vector<double> l1_project(const std::vector<double>& x, double theta,
                               const std::vector<double>* weights = nullptr);

/// Projection of g onto alpha*K, K the closure of {div p : |p| <= 1 per
/// node}, computed by the fixed-point iteration
///   p <- (p + tau * grad(div p - g/alpha)) / (1 + tau * |grad(...)|).
/// `dual` (optional) supplies a warm start and receives the final dual field,
/// which callers keep to warm-start later projections.
ProjectionResult chambolle_project(const GridFunction& g, double alpha,
                                   const ChambolleConfig& cfg, DualField* dual = nullptr);

/// 1-D restriction of chambolle_project (signal input).
ProjectionResult chambolle_project_1d(const GridFunction& g, double alpha,
                                      const ChambolleConfig& cfg, DualField* dual = nullptr);

/// 2-D restriction of chambolle_project (image input).
ProjectionResult chambolle_project_2d(const GridFunction& g, double alpha,
                                      const ChambolleConfig& cfg, DualField* dual = nullptr);

/// Proximity map of alpha * (discrete TV): g minus its projection onto
/// alpha*K. This is the thresholding step of all TV solvers here.
GridFunction generalized_threshold(const GridFunction& g, double alpha,
                                   const ChambolleConfig& cfg, DualField* dual = nullptr);

} // namespace subcorr
