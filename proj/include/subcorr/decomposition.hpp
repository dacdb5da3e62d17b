#pragma once

#include <cstdint>
#include <vector>

#include "subcorr/grid.hpp"
#include "subcorr/operators.hpp"

namespace subcorr {

enum class DecompKind { stripes_1d, stripes_2d, index_split, orthogonal };

/// Contiguous index range, inclusive; lo > hi encodes an empty block (which
/// appears when more subspaces than dimensions are requested — such blocks
/// are valid and simply idle).
struct Block {
  int lo = 0;
  int hi = -1;
  bool empty() const { return lo > hi; }
  int count() const { return empty() ? 0 : hi - lo + 1; }
};

/// Splitting of the solution space into `count` orthogonal subspaces.
/// Stripe kinds partition grid nodes (1-D) or grid rows (2-D) into
/// contiguous blocks; index-split partitions coordinates; the orthogonal
/// kind partitions the columns of an orthogonal matrix Q into blocks, the
/// i-th subspace being the span of its block's columns.
struct SubspaceDecomposition {
  DecompKind kind = DecompKind::index_split;
  Shape shape;
  int count = 1;
  std::vector<Block> blocks;  // row blocks for stripes-2d, index blocks otherwise
  std::vector<double> q;      // dim x dim row-major; empty when Q = I

  int dim() const { return shape.size(); }
  bool has_q() const { return !q.empty(); }

  /// Flat coordinate range covered by block i (rows expanded for 2-D).
  Block flat_block(int i) const;

  /// out = projection of u onto subspace i.
  void project(int i, const double* u, double* out) const;
  std::vector<double> project(int i, const std::vector<double>& u) const;

  /// out = u minus its subspace-i component (projection onto the complement).
  std::vector<double> project_complement(int i, const std::vector<double>& u) const;
};

/// Equal contiguous blocks of ceil(dim/count); trailing blocks may be empty
/// when count > dim.
std::vector<Block> partition_blocks(int dim, int count);

/// Stripe decomposition of a grid: node intervals in 1-D, row bands in 2-D.
/// Throws if count < 1 or count exceeds the stripe-able extent.
SubspaceDecomposition make_stripes(Shape shape, int count);

/// Coordinate split of R^dim (Q = I).
SubspaceDecomposition make_index_split(int dim, int count);

/// Q drawn as a seeded Gaussian matrix orthonormalized column-by-column with
/// modified Gram-Schmidt (redrawing a column on rank deficiency).
SubspaceDecomposition make_random_orthogonal(int dim, int count, std::uint64_t seed);

/// Q = V from the singular value decomposition T = U diag(s) V*, singular
/// values in descending order, so leading blocks span the best-conditioned
/// directions of T.
SubspaceDecomposition make_svd_q(const LinearMap& t, int count);

/// Decomposition switch strategy: use `from` for the first `switch_after`
/// outer iterations, then `to`.
struct SwitchSchedule {
  int switch_after = 0;
  DecompKind from = DecompKind::orthogonal;
  DecompKind to = DecompKind::index_split;
};

/// Kind in effect at 1-based outer iteration `iter`.
DecompKind schedule_kind(const SwitchSchedule& s, int iter);

} // namespace subcorr
