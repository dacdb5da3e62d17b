#include "subcorr/solvers.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "subcorr/kernels.hpp"
#include "subcorr/threading.hpp"

namespace subcorr {

namespace {

class Timer {
 public:
  Timer() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

double psi_value(const SolveProblem& p, const std::vector<double>& u) {
  if (p.psi == PsiKind::l1) {
    double s = 0.0;
    if (p.weights.empty()) {
      for (double x : u) s += std::fabs(x);
    } else {
      for (std::size_t i = 0; i < u.size(); ++i) s += p.weights[i] * std::fabs(u[i]);
    }
    return s;
  }
  return discrete_tv(GridFunction(p.shape, u));
}

double fidelity_scaled(const SolveProblem& p, const std::vector<double>& u) {
  std::vector<double> r = p.t.apply(u);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p.g[i];
  return kernels::norm2sq(r.data(), static_cast<int>(r.size()));
}

ObliqueOptions oblique_options(const SolveProblem& p, const SolverConfig& cfg) {
  ObliqueOptions opt;
  opt.alpha = p.effective_alpha();
  opt.max_eta_iters = cfg.eta_iters;
  opt.chambolle = cfg.chambolle;
  opt.weights = p.weights.empty() ? nullptr : &p.weights;
  return opt;
}

/// Per-subspace warm-start bundle carried across sweeps.
struct SubspaceState {
  EtaState eta;
  DualField threshold_dual;
  StripePlan plan;
};

std::vector<SubspaceState> make_states(const SolveProblem& p,
                                       const SubspaceDecomposition& dec,
                                       const SolverConfig& cfg, bool* clipped) {
  std::vector<SubspaceState> states(static_cast<std::size_t>(dec.count));
  if (p.psi != PsiKind::l1) {
    for (int i = 0; i < dec.count; ++i) {
      if (dec.blocks[static_cast<std::size_t>(i)].empty()) continue;
      states[static_cast<std::size_t>(i)].plan = make_stripe_plan(dec, i, cfg.stripe_halfwidth);
      if (clipped && states[static_cast<std::size_t>(i)].plan.clipped) *clipped = true;
    }
  }
  return states;
}

/// cfg.inner iterations of the subspace surrogate minimization: a Landweber
/// step projected onto the subspace followed by the oblique thresholding
/// against the frozen complement part.
std::vector<double> subspace_sweep(const SolveProblem& p, const SubspaceDecomposition& dec,
                                   int subspace, const std::vector<double>& u,
                                   const SolverConfig& cfg, SubspaceState& st,
                                   bool* diverged) {
  const int n = dec.dim();
  const ObliqueOptions opt = oblique_options(p, cfg);
  std::vector<double> ui = dec.project(subspace, u);
  std::vector<double> uc(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) uc[k] = u[k] - ui[k];

  const int inner_count = cfg.inner_schedule.empty()
                              ? cfg.inner
                              : cfg.inner_schedule[static_cast<std::size_t>(subspace)];
  std::vector<double> tot(static_cast<std::size_t>(n));
  std::vector<double> r(p.g.size());
  std::vector<double> a(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n));
  for (int l = 0; l < inner_count; ++l) {
    for (int k = 0; k < n; ++k) tot[k] = uc[k] + ui[k];
    p.t.apply(tot.data(), r.data());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = p.g[k] - r[k];
    p.t.adjoint_apply(r.data(), a.data());
    std::vector<double> pa = dec.project(subspace, a);
    for (int k = 0; k < n; ++k) z[k] = ui[k] + pa[k];
    ui = oblique_threshold(p.psi, z, uc, dec, subspace, st.plan, opt, st.eta,
                           &st.threshold_dual);
    if (st.eta.diverged) {
      if (diverged) *diverged = true;
      break;
    }
  }
  return ui;
}

void record(SolveResult& res, int iter, double j, double inc, const Timer& tm) {
  res.trace.push_back(TraceRow{iter, j, inc, tm.seconds()});
}

void add_minimality_warnings(SolveResult& res, const SolveProblem& p,
                             const SubspaceDecomposition& dec, bool clipped) {
  if (dec.count > 1 && (p.psi != PsiKind::l1 || dec.has_q())) {
    res.warnings.push_back(
        "energy decrease is guaranteed but minimality is not certified: the penalty "
        "does not split additively across this decomposition");
  }
  if (clipped) {
    res.warnings.push_back("stripe half-width exceeded a block or the grid edge; bands were clipped");
  }
}

void thomas_solve(std::vector<double>& sub, std::vector<double>& diag,
                  std::vector<double>& sup, std::vector<double>& rhs) {
  const int n = static_cast<int>(diag.size());
  for (int i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (int i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

} // namespace

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::tolerance: return "tolerance";
    case Termination::max_outer: return "max-outer";
    case Termination::eta_divergence: return "eta-divergence";
  }
  return "unknown";
}

SolveProblem make_problem(PsiKind psi, const LinearMap& t, std::vector<double> g,
                          double alpha, Shape shape, double target_norm,
                          std::uint64_t seed, std::vector<double> weights) {
  if (t.cols() != shape.size()) throw std::invalid_argument("operator/grid size mismatch");
  if (static_cast<int>(g.size()) != t.rows())
    throw std::invalid_argument("datum length does not match the operator range");
  if (alpha < 0.0) throw std::invalid_argument("alpha must be nonnegative");
  if (psi == PsiKind::tv_1d && shape.ndim != 1)
    throw std::invalid_argument("tv-1d needs a 1-D signal");
  if (psi == PsiKind::tv_2d && shape.ndim != 2)
    throw std::invalid_argument("tv-2d needs a 2-D image");
  if (!weights.empty()) {
    if (psi != PsiKind::l1) throw std::invalid_argument("weights apply to the l1 penalty only");
    if (static_cast<int>(weights.size()) != t.cols())
      throw std::invalid_argument("weight vector length mismatch");
    for (double w : weights)
      if (!(w > 0.0)) throw std::invalid_argument("l1 weights must be positive");
  }
  if (psi != PsiKind::l1) {
    // Coercivity: constants must not be annihilated (e.g. an all-zero mask).
    std::vector<double> ones(static_cast<std::size_t>(t.cols()), 1.0);
    std::vector<double> img = t.apply(ones);
    if (kernels::norm2(img.data(), static_cast<int>(img.size())) == 0.0)
      throw std::invalid_argument(
          "total-variation energy is not coercive: the operator annihilates constants");
  }

  RescaledProblem rp = rescale_problem(t, g, target_norm, seed);
  SolveProblem p;
  p.psi = psi;
  p.t = std::move(rp.t);
  p.g = std::move(rp.g);
  p.alpha = alpha;
  p.scale = rp.scale;
  p.shape = shape;
  p.weights = std::move(weights);
  return p;
}

double energy_scaled(const SolveProblem& p, const std::vector<double>& u) {
  return fidelity_scaled(p, u) + 2.0 * p.effective_alpha() * psi_value(p, u);
}

double energy(const SolveProblem& p, const std::vector<double>& u) {
  return p.scale * p.scale * fidelity_scaled(p, u) + 2.0 * p.alpha * psi_value(p, u);
}

double surrogate_energy(const SolveProblem& p, const std::vector<double>& u,
                        const std::vector<double>& a,
                        const SubspaceDecomposition& dec, int subspace) {
  const int n = dec.dim();
  std::vector<double> d = dec.project(subspace, u);
  for (int k = 0; k < n; ++k) d[k] -= a[k];
  std::vector<double> td = p.t.apply(d);
  return energy_scaled(p, u) + kernels::norm2sq(d.data(), n) -
         kernels::norm2sq(td.data(), static_cast<int>(td.size()));
}

SolveResult iterative_threshold_solve(const SolveProblem& p, const SolverConfig& cfg) {
  const Timer tm;
  const int n = p.t.cols();
  SolveResult res;
  res.u.assign(static_cast<std::size_t>(n), 0.0);

  double j = energy(p, res.u);
  record(res, 0, j, 0.0, tm);

  DualField dual;
  std::vector<double> r(p.g.size()), a(static_cast<std::size_t>(n)),
      z(static_cast<std::size_t>(n));
  const double ea = p.effective_alpha();
  for (int it = 1; it <= cfg.max_outer; ++it) {
    res.outer_iterations = it;
    p.t.apply(res.u.data(), r.data());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = p.g[k] - r[k];
    p.t.adjoint_apply(r.data(), a.data());
    for (int k = 0; k < n; ++k) z[k] = res.u[k] + a[k];

    std::vector<double> next;
    if (p.psi == PsiKind::l1) {
      next = soft_threshold(z, ea, p.weights.empty() ? nullptr : &p.weights);
    } else {
      next = generalized_threshold(GridFunction(p.shape, z), ea, cfg.chambolle, &dual).v;
    }
    double inc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double dd = next[k] - res.u[k];
      inc += dd * dd;
    }
    inc = std::sqrt(inc);
    res.u.swap(next);
    const double jn = energy(p, res.u);
    record(res, it, jn, inc, tm);
    if (std::fabs(j - jn) < cfg.tol_outer) {
      res.termination = Termination::tolerance;
      j = jn;
      break;
    }
    j = jn;
  }
  res.final_energy = j;
  return res;
}

namespace {

SolveResult correction_solve(const SolveProblem& p, const SubspaceDecomposition& dec,
                             const SolverConfig& cfg, const SubspaceDecomposition* initial,
                             bool synchronous) {
  const Timer tm;
  const int n = dec.dim();
  if (p.t.cols() != n) throw std::invalid_argument("operator/decomposition size mismatch");
  const bool scheduled = cfg.switch_after > 0 && initial != nullptr;
  if (!cfg.inner_schedule.empty()) {
    if (cfg.inner_schedule.size() != static_cast<std::size_t>(dec.count) ||
        (scheduled && initial->count != dec.count))
      throw std::invalid_argument("inner schedule length must match the subspace count");
    for (const int l : cfg.inner_schedule)
      if (l < 1) throw std::invalid_argument("inner iteration counts must be positive");
  }
  const SubspaceDecomposition* active = scheduled ? initial : &dec;

  SolveResult res;
  bool clipped = false;
  std::vector<SubspaceState> states = make_states(p, *active, cfg, &clipped);
  res.u.assign(static_cast<std::size_t>(n), 0.0);

  double j = energy(p, res.u);
  record(res, 0, j, 0.0, tm);
  res.termination = Termination::max_outer;

  std::vector<double> prev(static_cast<std::size_t>(n));
  bool diverged = false;
  for (int it = 1; it <= cfg.max_outer && !diverged; ++it) {
    res.outer_iterations = it;
    if (scheduled && it == cfg.switch_after + 1) {
      active = &dec;
      states = make_states(p, *active, cfg, &clipped);
    }
    prev = res.u;

    const int count = active->count;
    if (synchronous) {
      std::vector<std::vector<double>> comp(static_cast<std::size_t>(count));
      int div_flag = 0;
      const int nt = cfg.parallel_subspaces ? threading::max_threads() : 1;
#pragma omp parallel for num_threads(nt) schedule(static) if (cfg.parallel_subspaces)
      for (int i = 0; i < count; ++i) {
        if (active->blocks[static_cast<std::size_t>(i)].empty()) continue;
        bool div_i = false;
        comp[static_cast<std::size_t>(i)] =
            subspace_sweep(p, *active, i, prev, cfg, states[static_cast<std::size_t>(i)], &div_i);
        if (div_i) {
#pragma omp atomic write
          div_flag = 1;
        }
      }
      if (div_flag) {
        diverged = true;  // discard the round, nothing to merge
      } else {
        // Equal-weight average of the per-subspace updates; at two subspaces
        // this is (u1 + u2 + u_old) / 2. The same descent guard as in the
        // sequential branch applies to the merged iterate.
        auto merge = [&](std::vector<double>& out) {
          for (int k = 0; k < n; ++k) out[k] = (count - 1) * prev[k];
          for (int i = 0; i < count; ++i) {
            const auto& c = comp[static_cast<std::size_t>(i)];
            if (c.empty()) continue;
            for (int k = 0; k < n; ++k) out[k] += c[k];
          }
          for (int k = 0; k < n; ++k) out[k] /= count;
        };
        std::vector<double> cand(static_cast<std::size_t>(n));
        merge(cand);
        if (energy(p, cand) > j) {
          for (int i = 0; i < count; ++i) {
            auto& c = comp[static_cast<std::size_t>(i)];
            if (c.empty()) continue;
            c = active->project(i, c);
          }
          merge(cand);
          if (energy(p, cand) > j) cand = prev;
        }
        res.u = cand;
      }
    } else {
      // per-commit descent guard: the subspace update may carry a complement
      // residue from the capped multiplier iteration (it is what moves data
      // across a fidelity-free interface), but a residue that would push the
      // energy up is stripped, and a commit that still would is skipped
      double j_cur = j;
      std::vector<double> cand(static_cast<std::size_t>(n));
      for (int i = 0; i < count; ++i) {
        if (active->blocks[static_cast<std::size_t>(i)].empty()) continue;
        std::vector<double> ui =
            subspace_sweep(p, *active, i, res.u, cfg, states[static_cast<std::size_t>(i)],
                           &diverged);
        if (diverged) break;  // keep the commits made so far, drop this one
        std::vector<double> pi = active->project(i, res.u);
        for (int k = 0; k < n; ++k) cand[k] = (res.u[k] - pi[k]) + ui[k];
        double jc = energy(p, cand);
        if (jc > j_cur) {
          const std::vector<double> uip = active->project(i, ui);
          for (int k = 0; k < n; ++k) cand[k] = (res.u[k] - pi[k]) + uip[k];
          jc = energy(p, cand);
          if (jc > j_cur) continue;
        }
        res.u.swap(cand);
        j_cur = jc;
      }
    }

    double inc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = res.u[k] - prev[k];
      inc += d * d;
    }
    inc = std::sqrt(inc);
    const double jn = energy(p, res.u);
    record(res, it, jn, inc, tm);
    if (diverged) {
      res.termination = Termination::eta_divergence;
      j = jn;
      break;
    }
    if (std::fabs(j - jn) < cfg.tol_outer) {
      res.termination = Termination::tolerance;
      j = jn;
      break;
    }
    j = jn;
  }
  res.final_energy = j;
  add_minimality_warnings(res, p, dec, clipped);
  return res;
}

} // namespace

SolveResult sequential_solve(const SolveProblem& p, const SubspaceDecomposition& dec,
                             const SolverConfig& cfg, const SubspaceDecomposition* initial) {
  return correction_solve(p, dec, cfg, initial, /*synchronous=*/false);
}

SolveResult parallel_solve(const SolveProblem& p, const SubspaceDecomposition& dec,
                           const SolverConfig& cfg, const SubspaceDecomposition* initial) {
  return correction_solve(p, dec, cfg, initial, /*synchronous=*/true);
}

std::vector<double> naive_tv1d_solve(const std::vector<double>& g,
                                     const std::vector<double>& mask, double lambda0,
                                     double tau_step, double eps, int interface_node,
                                     int iters) {
  const int n = static_cast<int>(g.size());
  const int K = interface_node;  // nodes 0..K-1 form the left subdomain
  if (n < 4) throw std::invalid_argument("signal too short");
  if (mask.size() != g.size()) throw std::invalid_argument("mask length mismatch");
  if (K < 2 || K > n - 2) throw std::invalid_argument("interface too close to the boundary");
  if (!(tau_step > 0.0) || !(eps > 0.0) || lambda0 < 0.0 || iters < 0)
    throw std::invalid_argument("bad naive-solver parameters");

  const double tau = tau_step;
  std::vector<double> u = g;
  auto edge = [&](double a, double b) { return std::sqrt(eps * eps + (b - a) * (b - a)); };

  std::vector<double> sub, diag, sup, rhs;
  for (int it = 0; it < iters; ++it) {
    {  // left subdomain: tridiagonal step on 0..K-2, threshold rule at K-1
      const int m = K - 1;  // unknown count
      sub.assign(m, 0.0);
      diag.assign(m, 0.0);
      sup.assign(m, 0.0);
      rhs.assign(m, 0.0);
      for (int i = 0; i < m; ++i) {
        double d = 1.0;
        if (i > 0) {
          const double w = tau / edge(u[i - 1], u[i]);
          sub[i] = -w;
          d += w;
        }
        const double wr = tau / edge(u[i], u[i + 1]);
        d += wr;
        if (i + 1 <= m - 1) {
          sup[i] = -wr;
        }
        // fidelity taken implicitly so the step stays stable for any lambda0
        const double f = 2.0 * tau * lambda0 * mask[i];
        d += f;
        rhs[i] = u[i] + f * g[i];
        if (i + 1 == m) rhs[i] += wr * u[K - 1];  // frozen interface value
        diag[i] = d;
      }
      thomas_solve(sub, diag, sup, rhs);
      // curvature weight from the subdomain's own last interior edge; the
      // inclusion argument couples the fresh interior value to the old trace
      // of the other subdomain
      const double ci = edge(u[K - 2], u[K - 1]);
      const double v = soft_threshold(u[K] - rhs[m - 1], ci);
      for (int i = 0; i < m; ++i) u[i] = rhs[i];
      u[K - 1] = u[K] - v;
    }
    {  // right subdomain: tridiagonal step on K+1..n-1, threshold rule at K
      const int m = n - 1 - K;  // unknown count
      sub.assign(m, 0.0);
      diag.assign(m, 0.0);
      sup.assign(m, 0.0);
      rhs.assign(m, 0.0);
      for (int i = 0; i < m; ++i) {
        const int node = K + 1 + i;
        double d = 1.0;
        const double wl = tau / edge(u[node - 1], u[node]);
        d += wl;
        if (i > 0) {
          sub[i] = -wl;
        }
        if (node + 1 <= n - 1) {
          const double wr = tau / edge(u[node], u[node + 1]);
          d += wr;
          sup[i] = -wr;
        }
        const double f = 2.0 * tau * lambda0 * mask[node];
        d += f;
        rhs[i] = u[node] + f * g[node];
        if (i == 0) rhs[i] += wl * u[K];  // frozen interface value
        diag[i] = d;
      }
      thomas_solve(sub, diag, sup, rhs);
      const double ci = edge(u[K], u[K + 1]);  // own first interior edge, old state
      const double v = soft_threshold(u[K - 1] - rhs[0], ci);
      for (int i = 0; i < m; ++i) u[K + 1 + i] = rhs[i];
      u[K] = u[K - 1] - v;
    }
  }
  return u;
}

} // namespace subcorr
