#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace subcorr {

enum class MapKind { identity, diagonal_mask, dense, scaled };

/// Bounded linear map H -> H' in one of four concrete forms:
///  - identity on R^n,
///  - diagonal 0/1 mask (sampling / inpainting operator),
///  - dense row-major matrix,
///  - a wrapped map times a scalar factor (used by rescaling so that masks
///    keep their 0/1 payload).
class LinearMap {
 public:
  static LinearMap identity(int n);
  static LinearMap diagonal_mask(std::vector<double> diag);
  static LinearMap dense(int rows, int cols, std::vector<double> row_major);
  static LinearMap scaled(LinearMap inner, double factor);

  MapKind kind() const { return kind_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double factor() const { return factor_; }
  const std::vector<double>& payload() const { return a_; }
  const LinearMap& inner() const { return *inner_; }

  /// y = T x. `x` has cols() entries, `y` rows() entries.
  void apply(const double* x, double* y) const;
  /// y = T* x. `x` has rows() entries, `y` cols() entries.
  void adjoint_apply(const double* x, double* y) const;

  std::vector<double> apply(const std::vector<double>& x) const;
  std::vector<double> adjoint_apply(const std::vector<double>& x) const;

  /// Row-major dense rendering (for decompositions needing the matrix).
  std::vector<double> materialize() const;

 private:
  LinearMap() = default;
  MapKind kind_ = MapKind::identity;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
  std::shared_ptr<const LinearMap> inner_;
  double factor_ = 1.0;
};

struct NormBound {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Operator-norm estimate by power iteration on T*T from a seeded random
/// start; stops when the estimate changes by less than `tol` relatively.
/// Identity, mask and scaled-of-those are returned exactly without
/// iterating.
NormBound estimate_spectral_norm(const LinearMap& t, std::uint64_t seed,
                                 double tol = 1e-6, int max_iters = 1000);

struct RescaledProblem {
  LinearMap t;            // T / scale, operator norm ~= target
  std::vector<double> g;  // g / scale
  double scale = 1.0;
};

/// Divide T and g by c = (estimated norm)/target so the scaled operator has
/// norm ~= target < 1. Minimizers are preserved when the penalty weight is
/// divided by c^2; solvers apply that compensation internally. A zero map is
/// returned unscaled (scale 1).
RescaledProblem rescale_problem(const LinearMap& t, const std::vector<double>& g,
                                double target, std::uint64_t seed);

} // namespace subcorr
