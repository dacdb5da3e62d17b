#include "subcorr/oblique.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "subcorr/kernels.hpp"

namespace subcorr {

namespace {

bool is_stripe_kind(const SubspaceDecomposition& dec) {
  return dec.kind == DecompKind::stripes_1d || dec.kind == DecompKind::stripes_2d;
}

Shape band_shape(Shape full, RowBand band) {
  return full.ndim == 1 ? Shape::line(band.count())
                        : Shape::image(band.count(), full.cols);
}

int band_flat_lo(Shape full, RowBand band) {
  return full.ndim == 1 ? band.lo : band.lo * full.cols;
}

} // namespace

StripePlan make_stripe_plan(const SubspaceDecomposition& dec, int i, int halfwidth) {
  if (!is_stripe_kind(dec)) throw std::invalid_argument("stripe plan needs a stripe decomposition");
  const int rows = dec.shape.rows;
  const Block& b = dec.blocks[static_cast<std::size_t>(i)];
  StripePlan plan;
  if (b.empty()) return plan;

  if (halfwidth <= 0) {
    plan.threshold_band = RowBand{0, rows - 1};
    if (b.lo > 0 || b.hi < rows - 1) plan.eta_bands.push_back(RowBand{0, rows - 1});
    return plan;
  }

  plan.restricted = true;
  plan.threshold_band = RowBand{std::max(0, b.lo - halfwidth), std::min(rows - 1, b.hi + halfwidth)};

  std::vector<RowBand> bands;
  if (b.lo > 0) {  // interface to the previous block, between rows b.lo-1 | b.lo
    bands.push_back(RowBand{b.lo - halfwidth, b.lo + halfwidth - 1});
  }
  if (b.hi < rows - 1) {  // interface to the next block, between rows b.hi | b.hi+1
    bands.push_back(RowBand{b.hi + 1 - halfwidth, b.hi + halfwidth});
  }
  for (RowBand& band : bands) {
    if (band.lo < 0 || band.hi > rows - 1) plan.clipped = true;
    band.lo = std::max(band.lo, 0);
    band.hi = std::min(band.hi, rows - 1);
  }
  if (halfwidth > b.count()) plan.clipped = true;
  std::sort(bands.begin(), bands.end(), [](RowBand a, RowBand c) { return a.lo < c.lo; });
  for (const RowBand& band : bands) {
    if (!plan.eta_bands.empty() && band.lo <= plan.eta_bands.back().hi + 1) {
      plan.eta_bands.back().hi = std::max(plan.eta_bands.back().hi, band.hi);
    } else {
      plan.eta_bands.push_back(band);
    }
  }
  return plan;
}

GridFunction restrict_to_stripe(const std::vector<double>& full, Shape shape, RowBand band) {
  GridFunction out(band_shape(shape, band));
  const int lo = band_flat_lo(shape, band);
  std::copy(full.begin() + lo, full.begin() + lo + out.size(), out.v.begin());
  return out;
}

void eta_fixed_point(PsiKind psi, const std::vector<double>& zpu2,
                     const SubspaceDecomposition& dec, int subspace,
                     const StripePlan& plan, const ObliqueOptions& opt, EtaState& state) {
  const int n = dec.dim();
  // the multiplier restarts from zero on every call: carried across sweeps it
  // settles so well near a stationary iterate that the thresholded output
  // loses the complement residue which ferries updates over fidelity-free
  // interfaces, and inpainting fills straddling an interface freeze short of
  // the minimizer
  state.eta.assign(static_cast<std::size_t>(n), 0.0);
  state.band_duals.clear();
  state.converged = false;
  state.diverged = false;
  state.iterations = 0;
  state.sup_increment = 0.0;
  state.residual = 0.0;

  const double norm_scale = 1.0 + kernels::norm2(zpu2.data(), n);
  const double stop = opt.stop_scale * norm_scale;
  const double guard = opt.divergence_guard * norm_scale;

  const bool tv = psi != PsiKind::l1;
  const Block fb = dec.flat_block(subspace);
  if (fb.lo == 0 && fb.hi == n - 1) {  // complement is trivial: eta stays zero
    state.converged = true;
    return;
  }

  if (tv) {
    if (plan.eta_bands.empty()) {
      state.converged = true;
      return;
    }
    if (state.band_duals.size() != plan.eta_bands.size()) {
      state.band_duals.assign(plan.eta_bands.size(), DualField());
    }
  }

  std::vector<double> cand(static_cast<std::size_t>(n));
  std::vector<double> arg;
  for (int m = 1; m <= opt.max_eta_iters; ++m) {
    state.iterations = m;
    double sup_inc = 0.0;
    double l2_inc = 0.0;

    if (tv) {
      for (std::size_t bi = 0; bi < plan.eta_bands.size(); ++bi) {
        const RowBand band = plan.eta_bands[bi];
        GridFunction w(band_shape(dec.shape, band));
        const int lo = band_flat_lo(dec.shape, band);
        for (int k = 0; k < w.size(); ++k) w.v[k] = state.eta[lo + k] - zpu2[lo + k];
        ProjectionResult pr =
            chambolle_project(w, opt.alpha, opt.chambolle, &state.band_duals[bi]);
        for (int k = 0; k < w.size(); ++k) {
          const int node = lo + k;
          const double next = (node >= fb.lo && node <= fb.hi) ? 0.0 : pr.q.v[k];
          const double d = next - state.eta[node];
          sup_inc = std::max(sup_inc, std::fabs(d));
          l2_inc += d * d;
          state.eta[node] = next;
        }
      }
    } else {
      arg.resize(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) arg[k] = state.eta[k] - zpu2[k];
      std::vector<double> proj = l1_project(arg, opt.alpha, opt.weights);
      std::vector<double> next = dec.project_complement(subspace, proj);
      for (int k = 0; k < n; ++k) {
        const double d = next[k] - state.eta[k];
        sup_inc = std::max(sup_inc, std::fabs(d));
        l2_inc += d * d;
      }
      state.eta.swap(next);
    }

    state.sup_increment = sup_inc;
    state.residual = std::sqrt(l2_inc);
    if (kernels::norm2(state.eta.data(), n) > guard) {
      state.diverged = true;
      return;
    }
    if (sup_inc < stop) {
      state.converged = true;
      return;
    }
  }
}

std::vector<double> oblique_threshold(PsiKind psi, const std::vector<double>& z,
                                      const std::vector<double>& u2,
                                      const SubspaceDecomposition& dec, int subspace,
                                      const StripePlan& plan, const ObliqueOptions& opt,
                                      EtaState& state, DualField* threshold_dual) {
  const int n = dec.dim();
  std::vector<double> zpu2(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) zpu2[k] = z[k] + u2[k];

  eta_fixed_point(psi, zpu2, dec, subspace, plan, opt, state);

  std::vector<double> u1(static_cast<std::size_t>(n), 0.0);
  if (state.diverged) return u1;

  // the multiplier iteration is capped, so the thresholded output is returned
  // without re-projecting onto the subspace: the small complement residue it
  // carries is what propagates updates across a fidelity-free interface, and
  // it vanishes as the multiplier settles
  if (psi == PsiKind::l1) {
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) w[k] = zpu2[k] - state.eta[k];
    std::vector<double> s = soft_threshold(w, opt.alpha, opt.weights);
    for (int k = 0; k < n; ++k) s[k] -= u2[k];
    return s;
  }

  const RowBand tb = plan.threshold_band;
  GridFunction w(band_shape(dec.shape, tb));
  const int lo = band_flat_lo(dec.shape, tb);
  for (int k = 0; k < w.size(); ++k) w.v[k] = zpu2[lo + k] - state.eta[lo + k];
  GridFunction s = generalized_threshold(w, opt.alpha, opt.chambolle, threshold_dual);

  for (int k = 0; k < s.size(); ++k) u1[lo + k] = s.v[k] - u2[lo + k];
  return u1;
}

} // namespace subcorr
