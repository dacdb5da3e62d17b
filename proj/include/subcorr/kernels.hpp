#pragma once

#include <cstddef>

#include "subcorr/grid.hpp"

namespace subcorr {

/// Low-level array kernels. Every kernel exists twice: a plain serial
/// reference under kernels::serial (kept as the ground truth for tests and
/// the benchmark) and an OpenMP variant under kernels::omp. The dispatching
/// wrappers in the parent namespace pick the OpenMP path when the problem is
/// large enough to pay for the fork.
///
/// Parallel kernels only ever write disjoint locations and reduce with max
/// (exact in floating point), so serial and parallel paths produce
/// bit-identical results for any thread count. Sum-type reductions (dot,
/// norms, totals) are deliberately serial-only for the same reason.
namespace kernels {

namespace serial {

void gradient_1d(const double* u, int n, double* px);
void gradient_2d(const double* u, int rows, int cols, double* px, double* py);
void divergence_1d(const double* p, int n, double* out);
void divergence_2d(const double* px, const double* py, int rows, int cols, double* out);

/// Semi-implicit dual step p <- (p + tau*w) / (1 + tau*|w|) with |w| taken
/// per node; returns the maximum per-node dual increment.
double dual_update_1d(double* p, const double* w, int n, double tau);
double dual_update_2d(double* px, double* py, const double* wx, const double* wy,
                      int nodes, double tau);

void soft_threshold_vec(const double* x, int n, double theta, double* out);
void soft_threshold_vec_weighted(const double* x, int n, double theta,
                                 const double* w, double* out);
void clamp_vec(const double* x, int n, double bound, double* out);
void clamp_vec_weighted(const double* x, int n, double bound, const double* w, double* out);

/// y = A x with A row-major rows x cols.
void matvec(const double* a, int rows, int cols, const double* x, double* y);
/// y = A* x (transpose apply), x of length rows, y of length cols.
void matvec_adjoint(const double* a, int rows, int cols, const double* x, double* y);

} // namespace serial

namespace omp {

void gradient_1d(const double* u, int n, double* px);
void gradient_2d(const double* u, int rows, int cols, double* px, double* py);
void divergence_1d(const double* p, int n, double* out);
void divergence_2d(const double* px, const double* py, int rows, int cols, double* out);
double dual_update_1d(double* p, const double* w, int n, double tau);
double dual_update_2d(double* px, double* py, const double* wx, const double* wy,
                      int nodes, double tau);
void soft_threshold_vec(const double* x, int n, double theta, double* out);
void soft_threshold_vec_weighted(const double* x, int n, double theta,
                                 const double* w, double* out);
void clamp_vec(const double* x, int n, double bound, double* out);
void clamp_vec_weighted(const double* x, int n, double bound, const double* w, double* out);
void matvec(const double* a, int rows, int cols, const double* x, double* y);
void matvec_adjoint(const double* a, int rows, int cols, const double* x, double* y);

} // namespace omp

// Size-dispatching wrappers (the production entry points).
void gradient_1d(const double* u, int n, double* px);
void gradient_2d(const double* u, int rows, int cols, double* px, double* py);
void divergence_1d(const double* p, int n, double* out);
void divergence_2d(const double* px, const double* py, int rows, int cols, double* out);
double dual_update_1d(double* p, const double* w, int n, double tau);
double dual_update_2d(double* px, double* py, const double* wx, const double* wy,
                      int nodes, double tau);
void soft_threshold_vec(const double* x, int n, double theta, double* out);
void soft_threshold_vec_weighted(const double* x, int n, double theta,
                                 const double* w, double* out);
void clamp_vec(const double* x, int n, double bound, double* out);
void clamp_vec_weighted(const double* x, int n, double bound, const double* w, double* out);
void matvec(const double* a, int rows, int cols, const double* x, double* y);
void matvec_adjoint(const double* a, int rows, int cols, const double* x, double* y);

// Serial reductions and small vector helpers.
double dot(const double* a, const double* b, int n);
double norm2sq(const double* a, int n);
double norm2(const double* a, int n);
double sup_norm(const double* a, int n);
double sup_diff(const double* a, const double* b, int n);

} // namespace kernels

/// Forward-difference gradient. 1-D: px[i] = u[i+1] - u[i], last entry 0.
/// 2-D: px is the row-direction difference (zero on the last row), py the
/// column-direction difference (zero on the last column).
void gradient(const GridFunction& u, DualField& out);

/// Negative adjoint of `gradient` (backward-difference divergence):
/// 1-D (div p)_0 = p_0, interior p_i - p_{i-1}, (div p)_{n-1} = -p_{n-2};
/// 2-D the sum of the analogous row- and column-direction formulas.
void divergence(const DualField& p, GridFunction& out);

/// Discrete total variation: sum over nodes of the gradient magnitude
/// (absolute value in 1-D, euclidean norm of the (x,y) pair in 2-D).
double discrete_tv(const GridFunction& u);

} // namespace subcorr
