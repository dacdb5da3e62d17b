#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subcorr/decomposition.hpp"
#include "subcorr/grid.hpp"
#include "subcorr/oblique.hpp"
#include "subcorr/operators.hpp"
#include "subcorr/prox.hpp"

namespace subcorr {

/// Minimization target ||T u - g||^2 + 2*alpha*psi(u), stored in rescaled
/// form: `t` and `g` are the original operator and datum divided by `scale`
/// so that ||t|| < 1 (required by the thresholding iterations), while
/// `alpha` keeps its original value. Solvers weight the penalty by
/// alpha/scale^2 internally, which preserves minimizers, and report energies
/// in original units.
struct SolveProblem {
  PsiKind psi = PsiKind::tv_1d;
  LinearMap t = LinearMap::identity(0);
  std::vector<double> g;
  double alpha = 1.0;
  double scale = 1.0;
  Shape shape;
  std::vector<double> weights;  // l1 penalty weights; empty means all ones

  double effective_alpha() const { return alpha / (scale * scale); }
};

/// Validate and rescale unscaled inputs into a SolveProblem. For TV kinds
/// the energy must be coercive, which requires T applied to constants to be
/// nonzero (an inpainting mask with no observed node is rejected).
SolveProblem make_problem(PsiKind psi, const LinearMap& t, std::vector<double> g,
                          double alpha, Shape shape, double target_norm = 0.9,
                          std::uint64_t seed = 0x5eedcafeULL,
                          std::vector<double> weights = {});

struct SolverConfig {
  int max_outer = 200;
  double tol_outer = 1e-10;       // stop when |J_n - J_{n-1}| falls below
  int inner = 5;                  // subspace iterations per sweep
  std::vector<int> inner_schedule;  // per-subspace override; empty = uniform
  int eta_iters = 10;             // multiplier fixed-point cap per inner step
  int stripe_halfwidth = 10;      // 0 = unrestricted multiplier computation
  ChambolleConfig chambolle;
  bool parallel_subspaces = false;  // concurrent subspace solves (parallel_solve)
  int switch_after = 0;             // outer iterations on the initial decomposition
};

struct TraceRow {
  int iter = 0;
  double energy = 0.0;
  double increment = 0.0;  // ||u_n - u_{n-1}||
  double seconds = 0.0;    // wall time since solve start
};

enum class Termination { tolerance, max_outer, eta_divergence };

const char* termination_name(Termination t);

struct SolveResult {
  std::vector<double> u;
  std::vector<TraceRow> trace;
  Termination termination = Termination::max_outer;
  std::vector<std::string> warnings;
  double final_energy = 0.0;
  int outer_iterations = 0;
};

/// Objective value in original (unscaled) units.
double energy(const SolveProblem& p, const std::vector<double>& u);

/// Objective value of the rescaled problem actually iterated on.
double energy_scaled(const SolveProblem& p, const std::vector<double>& u);

/// Surrogate objective J(u) + ||u_i - a||^2 - ||t(u_i - a)||^2 in rescaled
/// units, u_i the subspace-i component of u and a a point of that subspace.
/// It dominates the objective and touches it at a = u_i.
double surrogate_energy(const SolveProblem& p, const std::vector<double>& u,
                        const std::vector<double>& a,
                        const SubspaceDecomposition& dec, int subspace);

/// Single-space iterative thresholding u <- S(u + T*(g - T u)).
SolveResult iterative_threshold_solve(const SolveProblem& p, const SolverConfig& cfg);

/// Alternating subspace correction: sweeps the subspaces in order, each
/// update seeing the freshest iterate. When cfg.switch_after > 0 and
/// `initial` is given, the first switch_after outer iterations run on
/// `initial`, the rest on `dec`.
SolveResult sequential_solve(const SolveProblem& p, const SubspaceDecomposition& dec,
                             const SolverConfig& cfg,
                             const SubspaceDecomposition* initial = nullptr);

/// Synchronous variant: all subspace corrections start from the same
/// iterate and are averaged, u <- (sum of new components + (count-1)*u) /
/// count. With cfg.parallel_subspaces the corrections run concurrently;
/// results are identical either way.
SolveResult parallel_solve(const SolveProblem& p, const SubspaceDecomposition& dec,
                           const SolverConfig& cfg,
                           const SubspaceDecomposition* initial = nullptr);

/// Two-domain comparison scheme for 1-D TV interpolation: per subdomain a
/// semi-implicit lagged-diffusivity step (tridiagonal solve, zero-flux outer
/// edges), with the subdomain boundary value set through a soft-threshold
/// coupling rule. `interface_node` is the 1-based size of the left
/// subdomain. Kept because its interface rule fails when the signal has
/// gradients of equal magnitude on both sides of the interface.
std::vector<double> naive_tv1d_solve(const std::vector<double>& g,
                                     const std::vector<double>& mask, double lambda0,
                                     double tau_step, double eps, int interface_node,
                                     int iters);

} // namespace subcorr
