#pragma once

#include <vector>

#include "subcorr/decomposition.hpp"
#include "subcorr/grid.hpp"
#include "subcorr/prox.hpp"

namespace subcorr {

enum class PsiKind { tv_1d, tv_2d, l1 };

/// Inclusive interval of nodes (1-D) or rows (2-D).
struct RowBand {
  int lo = 0;
  int hi = -1;
  bool empty() const { return lo > hi; }
  int count() const { return empty() ? 0 : hi - lo + 1; }
};

/// Reduced geometry for one subspace of a stripe decomposition.
///
/// `threshold_band` is the block padded by the stripe half-width on each
/// side; running the thresholding there is exact because the dropped
/// variation terms do not involve the block's unknowns. `eta_bands` are the
/// per-interface stripes (half-width on either side of each block boundary,
/// merged when they overlap) on which the multiplier fixed point is
/// iterated, each treated as a standalone grid; the multiplier is zero
/// outside. A half-width of 0 requests the unrestricted computation, as does
/// any half-width large enough to swallow the grid.
struct StripePlan {
  bool restricted = false;
  RowBand threshold_band;
  std::vector<RowBand> eta_bands;
  bool clipped = false;  // a band ran into the grid edge or a narrow neighbor
};

/// Build the stripe plan of subspace `i` with the given half-width.
StripePlan make_stripe_plan(const SubspaceDecomposition& dec, int i, int halfwidth);

/// Copy out the rows (2-D) or nodes (1-D) of `band` as a standalone grid.
GridFunction restrict_to_stripe(const std::vector<double>& full, Shape shape, RowBand band);

/// Multiplier iteration state; kept by callers so consecutive calls warm-
/// start from the previous multiplier and dual fields.
struct EtaState {
  std::vector<double> eta;
  double sup_increment = 0.0;
  double residual = 0.0;  // l2 norm of the last increment; the fixed-point map
                          // is nonexpansive, so this bounds the residual at
                          // the returned iterate
  int iterations = 0;
  bool converged = false;
  bool diverged = false;
  std::vector<DualField> band_duals;  // TV only: warm duals per eta band
};

struct ObliqueOptions {
  double alpha = 1.0;
  int max_eta_iters = 10;
  double stop_scale = 1e-4;        // stop: sup increment < stop_scale*(1+||z+u2||)
  double divergence_guard = 1e6;   // diverged: ||eta|| > guard*(1+||z+u2||)
  ChambolleConfig chambolle;       // TV projector evaluations
  const std::vector<double>* weights = nullptr;  // l1 penalty weights
};

/// Iterate eta <- proj_complement(P_alphaK(eta - (z+u2))) from the warm start
/// in `state` (zero if empty). P is evaluated per eta band for stripe plans
/// (componentwise clamp for the l1 penalty, where `plan` is ignored).
void eta_fixed_point(PsiKind psi, const std::vector<double>& z_plus_u2,
                     const SubspaceDecomposition& dec, int subspace,
                     const StripePlan& plan, const ObliqueOptions& opt, EtaState& state);

/// Minimizer of ||u - z||^2 + 2*alpha*psi(u + u2) over subspace `i`:
/// runs the multiplier iteration, then applies the generalized thresholding
/// S(z + u2 - eta) - u2 and projects onto the subspace (a no-op at an exact
/// fixed point; with capped eta iterations it strips the complement residue,
/// whose norm equals the fixed-point residual). `threshold_dual` optionally
/// warm-starts the TV thresholding.
std::vector<double> oblique_threshold(PsiKind psi, const std::vector<double>& z,
                                      const std::vector<double>& u2,
                                      const SubspaceDecomposition& dec, int subspace,
                                      const StripePlan& plan, const ObliqueOptions& opt,
                                      EtaState& state, DualField* threshold_dual = nullptr);

} // namespace subcorr
