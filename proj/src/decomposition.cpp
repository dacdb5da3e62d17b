#include "subcorr/decomposition.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "subcorr/kernels.hpp"
#include "subcorr/rng.hpp"

namespace subcorr {

Block SubspaceDecomposition::flat_block(int i) const {
  const Block& b = blocks[static_cast<std::size_t>(i)];
  if (kind == DecompKind::stripes_2d && !b.empty()) {
    return Block{b.lo * shape.cols, (b.hi + 1) * shape.cols - 1};
  }
  return b;
}

void SubspaceDecomposition::project(int i, const double* u, double* out) const {
  const int n = dim();
  if (!has_q()) {
    const Block fb = flat_block(i);
    std::memset(out, 0, sizeof(double) * static_cast<std::size_t>(n));
    if (!fb.empty())
      std::memcpy(out + fb.lo, u + fb.lo, sizeof(double) * static_cast<std::size_t>(fb.count()));
    return;
  }
  const Block& b = blocks[static_cast<std::size_t>(i)];
  std::memset(out, 0, sizeof(double) * static_cast<std::size_t>(n));
  for (int k = b.lo; k <= b.hi; ++k) {
    double c = 0.0;
    for (int r = 0; r < n; ++r) c += q[static_cast<std::size_t>(r) * n + k] * u[r];
    for (int r = 0; r < n; ++r) out[r] += c * q[static_cast<std::size_t>(r) * n + k];
  }
}

std::vector<double> SubspaceDecomposition::project(int i, const std::vector<double>& u) const {
  std::vector<double> out(u.size());
  project(i, u.data(), out.data());
  return out;
}

std::vector<double> SubspaceDecomposition::project_complement(
    int i, const std::vector<double>& u) const {
  std::vector<double> pi = project(i, u);
  std::vector<double> out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k] - pi[k];
  return out;
}

std::vector<Block> partition_blocks(int dim, int count) {
  if (count < 1) throw std::invalid_argument("subspace count must be positive");
  const int s = (dim + count - 1) / count;
  std::vector<Block> blocks(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const int lo = i * s;
    const int hi = std::min((i + 1) * s, dim) - 1;
    blocks[static_cast<std::size_t>(i)] = lo <= hi ? Block{lo, hi} : Block{dim, dim - 1};
  }
  return blocks;
}

SubspaceDecomposition make_stripes(Shape shape, int count) {
  const int extent = shape.rows;
  if (count < 1 || count > extent)
    throw std::invalid_argument("stripe count must lie in [1, rows]");
  SubspaceDecomposition d;
  d.kind = shape.ndim == 1 ? DecompKind::stripes_1d : DecompKind::stripes_2d;
  d.shape = shape;
  d.count = count;
  d.blocks = partition_blocks(extent, count);
  return d;
}

SubspaceDecomposition make_index_split(int dim, int count) {
  SubspaceDecomposition d;
  d.kind = DecompKind::index_split;
  d.shape = Shape::line(dim);
  d.count = count;
  d.blocks = partition_blocks(dim, count);
  return d;
}

SubspaceDecomposition make_random_orthogonal(int dim, int count, std::uint64_t seed) {
  SubspaceDecomposition d;
  d.kind = DecompKind::orthogonal;
  d.shape = Shape::line(dim);
  d.count = count;
  d.blocks = partition_blocks(dim, count);
  d.q.assign(static_cast<std::size_t>(dim) * dim, 0.0);

  GaussianSampler rng(seed);
  std::vector<double> col(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      for (double& v : col) v = rng.normal();
      // Modified Gram-Schmidt against the already accepted columns.
      for (int j = 0; j < k; ++j) {
        double c = 0.0;
        for (int r = 0; r < dim; ++r) c += d.q[static_cast<std::size_t>(r) * dim + j] * col[r];
        for (int r = 0; r < dim; ++r) col[r] -= c * d.q[static_cast<std::size_t>(r) * dim + j];
      }
      const double nrm = kernels::norm2(col.data(), dim);
      if (nrm > 1e-10) {
        for (int r = 0; r < dim; ++r) d.q[static_cast<std::size_t>(r) * dim + k] = col[r] / nrm;
        ok = true;
      }
    }
    if (!ok) throw std::runtime_error("random orthogonal basis: persistent rank deficiency");
  }
  return d;
}

SubspaceDecomposition make_svd_q(const LinearMap& t, int count) {
  const int rows = t.rows();
  const int dim = t.cols();
  std::vector<double> dense = t.materialize();
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> m(dense.data(), rows, dim);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const Eigen::MatrixXd& v = svd.matrixV();  // singular values descending

  SubspaceDecomposition d;
  d.kind = DecompKind::orthogonal;
  d.shape = Shape::line(dim);
  d.count = count;
  d.blocks = partition_blocks(dim, count);
  d.q.resize(static_cast<std::size_t>(dim) * dim);
  for (int r = 0; r < dim; ++r)
    for (int k = 0; k < dim; ++k) d.q[static_cast<std::size_t>(r) * dim + k] = v(r, k);
  return d;
}

DecompKind schedule_kind(const SwitchSchedule& s, int iter) {
  return iter <= s.switch_after ? s.from : s.to;
}

} // namespace subcorr
